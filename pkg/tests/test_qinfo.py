import math

import numpy as np
import pytest

from orbitsum.errors import DomainError
from orbitsum.linalg import RandomStream
from orbitsum.qinfo import (
    CORNER_LIMITS,
    DensityMatrix2,
    OrbitParams,
    Thresholds,
    coherence,
    coherence_average,
    coherence_average_quadrature,
    coherence_empirical,
    diag_mix_pdf,
    diag_mix_pdf_absolute_form,
    eigen_mix_pdf,
    qjsd,
    qjsd_average,
    qjsd_average_quadrature,
    qjsd_empirical,
    relative_entropy,
    surface_rows,
    thresholds,
    von_neumann_entropy,
)
from orbitsum.special import binary_entropy, integrate_piecewise


class TestThresholds:
    def test_pure_states(self):
        th = thresholds(OrbitParams(0.0, 0.0))
        assert (th.t0, th.t1) == (0.0, 0.5)

    def test_direct_arithmetic(self):
        th = thresholds(OrbitParams(0.2, 0.3))
        assert abs(th.t0 - 0.25) < 1e-15
        assert abs(th.t1 - 0.45) < 1e-15

    def test_equal_parameters(self):
        th = thresholds(OrbitParams(0.3, 0.3))
        assert th.t1 == 0.5

    def test_domain_rejections(self):
        with pytest.raises(DomainError):
            OrbitParams(0.5, 0.1)
        with pytest.raises(DomainError):
            OrbitParams(-0.01, 0.1)
        with pytest.raises(DomainError):
            Thresholds(0.4, 0.3)


def _pdf_breakpoints(p):
    th = thresholds(p)
    return sorted({0.0, th.t0, th.t1, 1.0 - th.t1, 1.0 - th.t0, 1.0})


class TestEigenMixPdf:
    def test_normalized_for_random_parameters(self):
        gen = np.random.default_rng(3)
        for _ in range(20):
            p = OrbitParams(*gen.uniform(0.0, 0.5, size=2).clip(0.0, 0.4999))
            total = integrate_piecewise(
                lambda lam: eigen_mix_pdf(p, lam), _pdf_breakpoints(p), tol=1e-13
            )
            assert abs(total - 1.0) < 1e-12

    def test_half_vanishes(self):
        assert eigen_mix_pdf(OrbitParams(0.1, 0.2), 0.5) == 0.0

    def test_gap_between_branches_vanishes(self):
        p = OrbitParams(0.1, 0.3)
        th = thresholds(p)
        mid = 0.5 * (th.t1 + (1.0 - th.t1))
        assert eigen_mix_pdf(p, mid) == 0.0
        assert eigen_mix_pdf(p, th.t1 + 1e-6) == 0.0

    def test_each_branch_carries_half(self):
        p = OrbitParams(0.15, 0.35)
        th = thresholds(p)
        lower = integrate_piecewise(
            lambda lam: eigen_mix_pdf(p, lam), [th.t0, th.t1], tol=1e-13
        )
        upper = integrate_piecewise(
            lambda lam: eigen_mix_pdf(p, lam), [1.0 - th.t1, 1.0 - th.t0], tol=1e-13
        )
        assert abs(lower - 0.5) < 1e-12
        assert abs(upper - 0.5) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            eigen_mix_pdf(OrbitParams(0.1, 0.1), 1.5)


class TestDiagMixPdf:
    def test_normalized_for_random_parameters(self):
        gen = np.random.default_rng(4)
        for _ in range(20):
            p = OrbitParams(*gen.uniform(0.0, 0.5, size=2).clip(0.0, 0.4999))
            total = integrate_piecewise(
                lambda x: diag_mix_pdf(p, x), _pdf_breakpoints(p), tol=1e-13
            )
            assert abs(total - 1.0) < 1e-12

    def test_continuous_at_t1(self):
        p = OrbitParams(0.2, 0.3)
        th = thresholds(p)
        plateau = (th.t1 - th.t0) / p.denom
        # left and right pieces evaluate to the plateau value at the junction
        assert abs(diag_mix_pdf(p, th.t1) - plateau) < 1e-15
        step = 1e-12
        slope = 1.0 / p.denom
        assert abs(diag_mix_pdf(p, th.t1 - step) - plateau) <= step * slope * 1.01 + 1e-15
        assert abs(diag_mix_pdf(p, th.t1 + step) - plateau) < 1e-15

    def test_support_boundary_vanishes(self):
        p = OrbitParams(0.2, 0.3)
        th = thresholds(p)
        assert diag_mix_pdf(p, th.t0) == 0.0
        assert diag_mix_pdf(p, 1.0 - th.t0) == 0.0

    def test_absolute_value_form_agrees(self):
        # the four-absolute-value printed form must coincide with the
        # piecewise reference on the whole interval
        gen = np.random.default_rng(5)
        for _ in range(10):
            p = OrbitParams(*gen.uniform(0.0, 0.45, size=2))
            for x in np.linspace(0.0, 1.0, 101):
                assert abs(diag_mix_pdf(p, x) - diag_mix_pdf_absolute_form(p, x)) < 1e-12


class TestClosedFormAverages:
    def test_qjsd_at_origin(self):
        expect = math.log(2.0) / 3.0 + 1.0 / 6.0
        assert abs(qjsd_average(OrbitParams(0.0, 0.0)) - expect) < 1e-12

    def test_coherence_at_origin(self):
        expect = (2.0 / 3.0) * (1.0 - math.log(2.0))
        assert abs(coherence_average(OrbitParams(0.0, 0.0)) - expect) < 1e-12

    def test_symmetry(self):
        a = qjsd_average(OrbitParams(0.1, 0.3))
        b = qjsd_average(OrbitParams(0.3, 0.1))
        assert abs(a - b) < 1e-14
        assert abs(
            coherence_average(OrbitParams(0.1, 0.3)) - coherence_average(OrbitParams(0.3, 0.1))
        ) < 1e-14

    def test_limits_toward_half(self):
        p = OrbitParams(0.0, 0.5 - 1e-6)
        assert abs(qjsd_average(p) - CORNER_LIMITS["qjsd"][(0.0, 0.5)]) < 1e-4
        assert abs(coherence_average(p) - CORNER_LIMITS["coherence"][(0.0, 0.5)]) < 1e-4

    def test_quadrature_agreement_grid(self):
        for mu in np.linspace(0.0, 0.475, 20):
            for nu in np.linspace(0.0, 0.475, 20):
                p = OrbitParams(mu, nu)
                assert abs(qjsd_average(p) - qjsd_average_quadrature(p)) < 1e-10
                assert abs(coherence_average(p) - coherence_average_quadrature(p)) < 1e-10

    def test_monotone_corner_ordering(self):
        a = qjsd_average(OrbitParams(0.0, 0.0))
        b = qjsd_average(OrbitParams(0.1, 0.1))
        c = qjsd_average(OrbitParams(0.4, 0.4))
        assert a > b > c

    def test_coherence_nonnegative_on_grid(self):
        for mu in np.linspace(0.0, 0.49, 50):
            for nu in np.linspace(0.0, 0.49, 50):
                assert coherence_average(OrbitParams(mu, nu)) >= 0.0


class TestEntropies:
    def test_maximally_mixed_and_pure(self):
        assert abs(von_neumann_entropy(DensityMatrix2(np.eye(2) / 2)) - math.log(2.0)) < 1e-15
        assert von_neumann_entropy(DensityMatrix2(np.diag([1.0, 0.0]))) == 0.0

    def test_coherence_of_diagonal_state(self):
        assert coherence(DensityMatrix2(np.diag([0.7, 0.3]))) == 0.0

    def test_qjsd_self_is_zero(self):
        rho = DensityMatrix2([[0.6, 0.2], [0.2, 0.4]])
        assert abs(qjsd(rho, rho)) < 1e-12

    def test_qjsd_two_routes_agree(self):
        rho1 = DensityMatrix2([[0.8, 0.1j], [-0.1j, 0.2]])
        rho2 = DensityMatrix2([[0.3, 0.05], [0.05, 0.7]])
        mixture = DensityMatrix2(0.5 * rho1.mat + 0.5 * rho2.mat)
        direct = qjsd(rho1, rho2)
        holevo = (
            von_neumann_entropy(mixture)
            - 0.5 * von_neumann_entropy(rho1)
            - 0.5 * von_neumann_entropy(rho2)
        )
        assert abs(direct - holevo) < 1e-12

    def test_relative_entropy_support_violation(self):
        rho = DensityMatrix2(np.diag([0.5, 0.5]))
        pure = DensityMatrix2(np.diag([1.0, 0.0]))
        with pytest.raises(DomainError, match="support"):
            relative_entropy(rho, pure)

    def test_density_matrix_validation(self):
        with pytest.raises(DomainError):
            DensityMatrix2(np.diag([0.7, 0.7]))
        with pytest.raises(DomainError):
            DensityMatrix2([[1.5, 0.0], [0.0, -0.5]])


class TestEmpirical:
    def test_qjsd_monte_carlo_matches_closed_form(self):
        p = OrbitParams(0.1, 0.2)
        mean, stderr = qjsd_empirical(p, 100_000, RandomStream(seed=0))
        assert abs(mean - qjsd_average(p)) < 3.0 * stderr

    def test_zero_samples_rejected(self):
        with pytest.raises(DomainError):
            qjsd_empirical(OrbitParams(0.25, 0.25), 0, RandomStream(seed=0))

    def test_stderr_scales_like_inverse_sqrt(self):
        p = OrbitParams(0.1, 0.2)
        _, se4 = qjsd_empirical(p, 10_000, RandomStream(seed=1))
        _, se6 = qjsd_empirical(p, 1_000_000, RandomStream(seed=2))
        ratio = se4 / se6
        assert abs(ratio - 10.0) < 2.0  # within 20%

    @pytest.mark.parametrize("mu,nu", [(0.1, 0.2), (0.05, 0.4)])
    def test_coherence_monte_carlo(self, mu, nu):
        p = OrbitParams(mu, nu)
        mean, stderr = coherence_empirical(p, 100_000, RandomStream(seed=0))
        assert abs(mean - coherence_average(p)) < 3.0 * stderr

    def test_eigen_mix_law_via_entropy_identity(self):
        # E H2(lambda) computed from the eigenvalue law equals the MC mean of
        # the mixture entropy; ties the sampled law to the analytic one
        p = OrbitParams(0.2, 0.3)
        mean, stderr = qjsd_empirical(p, 50_000, RandomStream(seed=3))
        expect = qjsd_average_quadrature(p)
        assert abs(mean - expect) < 3.0 * stderr


class TestSurface:
    def test_rows_cover_grid(self):
        rows = surface_rows("qjsd", 4)
        assert len(rows) == 16
        assert rows[0][:2] == (0.0, 0.0)
        assert abs(rows[0][2] - qjsd_average(OrbitParams(0.0, 0.0))) < 1e-15

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            surface_rows("negativity", 3)
