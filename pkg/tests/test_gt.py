import math
from fractions import Fraction

import numpy as np
import pytest

from orbitsum import kernels
from orbitsum.errors import DomainError
from orbitsum.golden_thompson import (
    GtReport,
    alpha_ratio,
    expected_exp_sum,
    expected_exp_sum_quadrature,
    expected_matrix_function_gue,
    gt_empirical,
    kappa_exp,
    least_squares_fit,
    ln_alpha,
    ln_alpha_scan,
)
from orbitsum.linalg import HermitianMatrix, RandomStream, matrix_exp


def printed_kappa(n: int, t: float) -> float:
    """The closed polynomials for n = 2, 3, 4 (independent check values)."""
    if n == 2:
        return 0.25 * math.exp(t * t / 4.0) * (t * t + 4.0)
    if n == 3:
        return math.exp(t * t / 4.0) * (t**4 + 12.0 * t * t + 24.0) / 24.0
    if n == 4:
        return math.exp(t * t / 4.0) * (t * t * (t * t + 12.0) ** 2 + 192.0) / 192.0
    raise ValueError(n)


def printed_exp_sum(n: int, t: float) -> float:
    """The closed K = 2 polynomials for n = 2, 3, 4."""
    if n == 2:
        return math.exp(t * t / 2.0) * (t * t + 2.0) / 2.0
    if n == 3:
        return math.exp(t * t / 2.0) * (t**4 + 6.0 * t * t + 6.0) / 6.0
    if n == 4:
        return math.exp(t * t / 2.0) * (t * t * (t * t + 6.0) ** 2 + 24.0) / 24.0
    raise ValueError(n)


class TestExpectedMatrixFunction:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_constant_function_normalizes(self, n):
        assert abs(expected_matrix_function_gue(n, lambda x: 1.0) - 1.0) < 1e-10

    def test_odd_function_vanishes(self):
        assert abs(expected_matrix_function_gue(3, lambda x: x)) < 1e-12

    def test_exponential_matches_closed_form(self):
        got = expected_matrix_function_gue(2, math.exp, radius=12.0)
        assert abs(got - math.exp(0.25) * 1.25) < 1e-9


class TestKappaExp:
    def test_at_zero(self):
        for n in (1, 2, 5):
            assert kappa_exp(n, 0.0) == 1.0

    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_printed_polynomials(self, n, t):
        got = kappa_exp(n, t)
        expect = printed_kappa(n, t)
        assert abs(got - expect) <= 1e-12 * abs(expect)

    def test_quadrature_cross_check(self):
        for n in (2, 3, 4):
            for t in (0.5, 1.0):
                quad = expected_matrix_function_gue(
                    n, lambda x: math.exp(t * x), radius=max(8.0, abs(t) + 8.0 * math.sqrt(n))
                )
                assert abs(quad - kappa_exp(n, t)) < 1e-9


class TestExpectedExpSum:
    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("t", [0.5, 1.0])
    def test_printed_k2_polynomials(self, n, t):
        got = expected_exp_sum(n, 2, t)
        expect = printed_exp_sum(n, t)
        assert abs(got - expect) <= 1e-12 * abs(expect)

    def test_k1_degenerates_to_kappa(self):
        for n in (2, 3, 4):
            for t in (0.5, 1.0, 2.0):
                assert abs(expected_exp_sum(n, 1, t) - kappa_exp(n, t)) < 1e-9

    def test_quadrature_form_agrees(self):
        for (n, K, t) in [(2, 2, 1.0), (3, 2, 0.5), (2, 3, 1.0)]:
            a = expected_exp_sum(n, K, t)
            b = expected_exp_sum_quadrature(n, K, t)
            assert abs(a - b) < 1e-9

    def test_monte_carlo_triangle(self):
        # closed form vs quadrature vs a trace-average Monte Carlo, pairwise
        draws = 20_000
        for n in (2, 3, 4):
            for t in (0.5, 1.0):
                closed = kappa_exp(n, t)
                quad = expected_matrix_function_gue(
                    n, lambda x: math.exp(t * x), radius=max(8.0, abs(t) + 8.0 * math.sqrt(n))
                )
                assert abs(closed - quad) < 1e-8
                gen = RandomStream(seed=100 + n).generator
                z = gen.standard_normal((draws, n * n))
                eigs = kernels.gue_sum_eigs(n, 1, z)
                vals = np.exp(t * eigs).sum(axis=1) / n
                mean = vals.mean()
                stderr = vals.std(ddof=1) / math.sqrt(draws)
                assert abs(mean - closed) < 3.0 * stderr


class TestAlphaRatio:
    def test_exact_printed_fractions(self):
        assert alpha_ratio(2) == Fraction(25, 24)
        assert alpha_ratio(3) == Fraction(1369, 1248)
        assert alpha_ratio(4) == Fraction(130321, 112128)

    def test_ln_values(self):
        assert abs(ln_alpha(2) - 0.040822) < 5e-7
        assert abs(ln_alpha(3) - 0.0925383) < 5e-8
        assert abs(ln_alpha(4) - 0.15036) < 5e-6

    def test_strict_gap_and_monotonicity_to_50(self):
        prev = None
        for n in range(2, 51):
            a = alpha_ratio(n)
            assert a > 1  # exact rational comparison
            if prev is not None:
                assert a > prev  # ln alpha_n increasing
            prev = a

    def test_scan_table(self):
        table = ln_alpha_scan(6)
        assert table.abscissae == (2.0, 3.0, 4.0, 5.0, 6.0)
        assert abs(table.ordinates[0] - math.log(25 / 24)) < 1e-15

    def test_fit_recovers_exact_line(self):
        from orbitsum.special import RealFunctionTable

        t = RealFunctionTable((1.0, 2.0, 3.0, 4.0), (3.0, 5.0, 7.0, 9.0))
        slope, intercept = least_squares_fit(t, 1.0, 4.0)
        assert abs(slope - 2.0) < 1e-12
        assert abs(intercept - 1.0) < 1e-12

    def test_fit_window_needs_points(self):
        with pytest.raises(DomainError):
            least_squares_fit(ln_alpha_scan(5), 10.0, 20.0)


class TestGtEmpirical:
    def test_commuting_pair_exact_equality(self):
        # injected commuting path: diagonal X, Y give Tr e^{X+Y} = Tr e^X e^Y
        x = HermitianMatrix(np.diag([0.4, -0.9]))
        y = HermitianMatrix(np.diag([1.1, 0.3]))
        lhs = matrix_exp(x + y).mat.trace().real
        rhs = (matrix_exp(x).mat @ matrix_exp(y).mat).trace().real
        assert abs(lhs - rhs) < 1e-10

    def test_no_violations_and_ratio(self):
        report = gt_empirical(2, 100_000, RandomStream(seed=0))
        assert report.violations == 0
        assert abs(report.empirical_ratio - 25.0 / 24.0) < 3.0 * report.stderr
        assert report.analytic_ratio == float(Fraction(25, 24))

    def test_report_json_fields(self):
        import json

        report = GtReport(2, 10, 1.04, 0.01, 25 / 24, 0)
        decoded = json.loads(report.to_json())
        assert set(decoded) == {
            "n", "samples", "empirical_ratio", "stderr", "analytic_ratio", "violations",
        }

    def test_off_diagonal_mean_vanishes(self):
        # E[e^{tH}] is proportional to the identity: off-diagonal means ~ 0
        draws, n, t = 20_000, 2, 1.0
        gen = RandomStream(seed=77).generator
        z = gen.standard_normal((draws, n * n))
        from orbitsum.kernels import fallback

        h = fallback._gue_batch(n, z)
        w, v = np.linalg.eigh(h)
        exp_h = np.einsum("nik,nk,njk->nij", v, np.exp(t * w), v.conj())
        off = exp_h[:, 0, 1]
        for part in (off.real, off.imag):
            stderr = part.std(ddof=1) / math.sqrt(draws)
            assert abs(part.mean()) < 3.0 * stderr

    def test_bad_parameters(self):
        with pytest.raises(DomainError):
            gt_empirical(0, 10, RandomStream(seed=0))
        with pytest.raises(DomainError):
            gt_empirical(2, 0, RandomStream(seed=0))
