"""Expectations of matrix functions over GUE, the exponential-trace ratio
quantifying the average Golden-Thompson gap, and its exact rational scan."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import DomainError
from .linalg import RandomStream
from .special import (
    RealFunctionTable,
    confluent_F,
    integrate,
    single_eigenvalue_density,
    single_eigenvalue_density_sum,
)

GT_RELATIVE_SLACK = 1e-9


@dataclass(frozen=True)
class GtReport:
    """Monte Carlo summary of Tr e^X e^Y versus Tr e^{X+Y} over GUE draws."""

    n: int
    samples: int
    empirical_ratio: float
    stderr: float
    analytic_ratio: float
    violations: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "samples": self.samples,
                "empirical_ratio": self.empirical_ratio,
                "stderr": self.stderr,
                "analytic_ratio": self.analytic_ratio,
                "violations": self.violations,
            }
        )


def quadrature_radius(n: int, t: float = 0.0) -> float:
    """Truncation radius for Gaussian-weighted spectral integrands."""
    return max(8.0, abs(t) + 8.0 * math.sqrt(n))


def expected_matrix_function_gue(n: int, f, radius: float | None = None, tol: float = 1e-11) -> float:
    """Scalar kappa_n(f) with E[f(H)] = kappa_n(f) I over GUE(n).

    Computed as int f(x) p(x) dx against the single-eigenvalue density by
    adaptive quadrature on [-R, R]; the caller guarantees integrability
    against Gaussian tails (and supplies R when f grows).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    r = radius if radius is not None else quadrature_radius(n)
    return integrate(lambda x: f(x) * single_eigenvalue_density(n, x), -r, r, tol=tol)


def kappa_exp(n: int, t: float) -> float:
    """kappa_n(exp, t) = e^{t^2/4} F(1-n, 2; -t^2/2), the GUE exponential moment."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return math.exp(0.25 * t * t) * confluent_F(1 - n, 2, -0.5 * t * t)


def expected_exp_sum(n: int, K: int, t: float) -> float:
    """(1/n) E[Tr e^{tS}] for S a sum of K i.i.d. GUE(n) matrices.

    Equals the sqrt(K)-rescaled kappa integral int e^{tx} p_K(x) dx, which
    collapses to the closed form e^{K t^2/4} F(1-n, 2; -K t^2/2).
    """
    if n < 1 or K < 1:
        raise DomainError("n and K must be >= 1")
    return math.exp(0.25 * K * t * t) * confluent_F(1 - n, 2, -0.5 * K * t * t)


def expected_exp_sum_quadrature(n: int, K: int, t: float, tol: float = 1e-11) -> float:
    """Quadrature form of :func:`expected_exp_sum` (used as its cross-check)."""
    r = math.sqrt(K) * quadrature_radius(n, t)
    return integrate(
        lambda x: math.exp(t * x) * single_eigenvalue_density_sum(n, K, x), -r, r, tol=tol
    )


def alpha_ratio(n: int) -> Fraction:
    """Exact ratio E[Tr e^X e^Y] / E[Tr e^{X+Y}] over GUE(n) pairs.

    alpha_n = F(1-n, 2; -1/2)^2 / F(1-n, 2; -1), evaluated in rational
    arithmetic; alpha_n > 1 measures the average Golden-Thompson gap.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    num = confluent_F(1 - n, Fraction(2), Fraction(-1, 2))
    den = confluent_F(1 - n, Fraction(2), Fraction(-1))
    return num * num / den


def ln_alpha(n: int) -> float:
    """ln(alpha_n) from the exact fraction (big-integer logs, no overflow)."""
    a = alpha_ratio(n)
    return math.log(a.numerator) - math.log(a.denominator)


def ln_alpha_scan(n_max: int) -> RealFunctionTable:
    """Table of (n, ln alpha_n) for n = 2..n_max."""
    if n_max < 2:
        raise DomainError("n_max must be >= 2")
    ns = list(range(2, n_max + 1))
    return RealFunctionTable(
        abscissae=tuple(float(n) for n in ns),
        ordinates=tuple(ln_alpha(n) for n in ns),
    )


def least_squares_fit(table: RealFunctionTable, lo: float, hi: float) -> tuple[float, float]:
    """Ordinary least-squares (slope, intercept) over abscissae in [lo, hi]."""
    pairs = [(x, y) for x, y in zip(table.abscissae, table.ordinates) if lo <= x <= hi]
    if len(pairs) < 2:
        raise DomainError("need at least two points inside the fit window")
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    m = len(pairs)
    xbar = sum(xs) / m
    ybar = sum(ys) / m
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, ybar - slope * xbar


def gt_empirical(
    n: int, samples: int, stream: RandomStream, t: float = 1.0, workers: int = 1
) -> GtReport:
    """Monte Carlo check of the trace inequality and its average ratio.

    Per draw, Tr e^{t(X+Y)} <= Tr e^{tX} e^{tY} is verified with a relative
    slack of 1e-9; the ratio of the two sample means is compared against the
    exact alpha_n (for t = 1) with a delta-method standard error.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if samples < 1:
        raise DomainError("samples must be >= 1")
    width = kernels.normals_per_draw("gt_traces", n=n)
    sums = {"u": 0.0, "v": 0.0, "uu": 0.0, "vv": 0.0, "uv": 0.0}
    violations = 0
    for index, count in enumerate(kernels.chunk_sizes(samples)):
        gen = stream.substream(index).generator
        z = gen.standard_normal((count, width))
        tr_prod, tr_sum = kernels.gt_traces(n, t, z)
        violations += int((tr_sum > tr_prod * (1.0 + GT_RELATIVE_SLACK)).sum())
        sums["u"] += float(tr_prod.sum())
        sums["v"] += float(tr_sum.sum())
        sums["uu"] += float((tr_prod * tr_prod).sum())
        sums["vv"] += float((tr_sum * tr_sum).sum())
        sums["uv"] += float((tr_prod * tr_sum).sum())
    ubar = sums["u"] / samples
    vbar = sums["v"] / samples
    ratio = ubar / vbar
    var_u = max(sums["uu"] / samples - ubar * ubar, 0.0)
    var_v = max(sums["vv"] / samples - vbar * vbar, 0.0)
    cov = sums["uv"] / samples - ubar * vbar
    rel_var = var_u / ubar**2 + var_v / vbar**2 - 2.0 * cov / (ubar * vbar)
    stderr = abs(ratio) * math.sqrt(max(rel_var, 0.0) / samples)
    analytic = float(alpha_ratio(n)) if t == 1.0 else (
        kappa_exp(n, t) ** 2 / expected_exp_sum(n, 2, t)
    )
    return GtReport(
        n=n,
        samples=samples,
        empirical_ratio=ratio,
        stderr=stderr,
        analytic_ratio=analytic,
        violations=violations,
    )
