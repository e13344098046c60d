"""Conditional densities for the spectrum of C = A + B on fixed unitary orbits.

General n is covered by the sign-sum coefficient combinatorics (the singular
oscillatory integrals multiplying them are validated by Monte Carlo instead
of being evaluated); n = 2 is in closed form for both the diagonal entry and
the eigenvalue gap, with the derivative principle applied piecewise
analytically as a cross-check of the gap density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DimensionError, DomainError
from .linalg import Spectrum

TRACE_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumPair2:
    """Ordered 2-dimensional spectra (a, b) with their orbit widths.

    alpha = a1 - a2 >= 0 and beta = b1 - b2 >= 0 fully determine the shape of
    both n = 2 densities; the traces only shift them.
    """

    a: Spectrum
    b: Spectrum
    alpha: float = field(init=False)
    beta: float = field(init=False)

    def __post_init__(self):
        if self.a.dim != 2 or self.b.dim != 2:
            raise DimensionError("SpectrumPair2 needs two spectra of dimension 2")
        object.__setattr__(self, "alpha", float(self.a[0] - self.a[1]))
        object.__setattr__(self, "beta", float(self.b[0] - self.b[1]))

    @property
    def trace_sum(self) -> float:
        return self.a.sum() + self.b.sum()

    def require_nondegenerate(self):
        if self.alpha <= 0.0 or self.beta <= 0.0:
            raise DomainError(
                "degenerate orbit (alpha or beta is zero): the density is a point mass"
            )


@dataclass(frozen=True)
class GapInterval:
    """Support (|alpha - beta|, alpha + beta) of the n = 2 eigenvalue gap."""

    low: float
    high: float

    def __post_init__(self):
        if not 0.0 <= self.low <= self.high:
            raise DomainError("need 0 <= low <= high")

    @classmethod
    def from_pair(cls, pair: SpectrumPair2) -> "GapInterval":
        return cls(abs(pair.alpha - pair.beta), pair.alpha + pair.beta)


def _check_perm(perm, n: int):
    if sorted(perm) != list(range(n)):
        raise DomainError(f"{perm} is not a permutation of 0..{n - 1}")


def b_coefficient(k: int, sigma, tau, a: Spectrum, b: Spectrum, c_diag) -> float:
    """Phase coefficient of the diagonal-density sign sum.

    B_k(sigma, tau) = sum_{j<=k} (a_{sigma(j)} + b_{tau(j)} - C_jj)
                      - (k/n) sum_{j<=n} (a_j + b_j - C_jj),
    with 1 <= k <= n-1 and zero-based permutations.
    """
    n = a.dim
    if b.dim != n or len(c_diag) != n:
        raise DimensionError("a, b, c_diag must share one dimension")
    if not 1 <= k <= n - 1:
        raise DomainError(f"k must lie in [1, {n - 1}], got {k}")
    _check_perm(sigma, n)
    _check_perm(tau, n)
    head = sum(a[sigma[j]] + b[tau[j]] - c_diag[j] for j in range(k))
    total = sum(a[j] + b[j] - c_diag[j] for j in range(n))
    return float(head - k * total / n)


def a_coefficient(k: int, sigma, tau, a: Spectrum, b: Spectrum, c) -> float:
    """Same sign-sum coefficient with an eigenvalue vector c in place of the diagonal."""
    return b_coefficient(k, sigma, tau, a, b, c)


def diag_pdf_2x2(pair: SpectrumPair2, c11: float, trace: float) -> float:
    """Density of the first diagonal entry C11 of C = A + B on the trace slice.

    With gamma = 2*C11 - trace (the slice substitution C22 = trace - C11),
    the density is the four-absolute-value bracket
    (|a+b-g| + |a+b+g| - |a-b-g| - |a-b+g|) / (4 alpha beta): a trapezoid
    supported on C11 in [trace/2 - (alpha+beta)/2, trace/2 + (alpha+beta)/2].
    """
    pair.require_nondegenerate()
    if abs(trace - pair.trace_sum) > TRACE_TOL:
        raise DomainError(
            f"trace {trace} violates the slice constraint sum(a)+sum(b) = {pair.trace_sum}"
        )
    gamma = 2.0 * c11 - trace
    al, be = pair.alpha, pair.beta
    bracket = (
        abs(al + be - gamma) + abs(al + be + gamma)
        - abs(al - be - gamma) - abs(al - be + gamma)
    )
    return bracket / (4.0 * al * be)


def eigen_gap_pdf_2x2(pair: SpectrumPair2, gap: float) -> float:
    """Density of the ordered eigenvalue gap c1 - c2 of C = A + B at n = 2.

    Linear on the open interval (|alpha-beta|, alpha+beta), zero outside
    (including the closed-support boundary points).
    """
    pair.require_nondegenerate()
    if gap < 0:
        raise DomainError("gap must be nonnegative (ordered spectrum)")
    iv = GapInterval.from_pair(pair)
    if not iv.low < gap < iv.high:
        return 0.0
    return gap / (2.0 * pair.alpha * pair.beta)


def eigen_pdf_2x2_from_diag(pair: SpectrumPair2, gap: float) -> float:
    """Gap density recovered from the diagonal density via the derivative principle.

    At n = 2 the operator reduces to -d * f'(d) where f is the trapezoidal
    diagonal-slice density as a function of the diagonal difference; f' is
    evaluated piecewise (the trapezoid's slopes), so evaluation exactly at a
    breakpoint is rejected.
    """
    pair.require_nondegenerate()
    if gap < 0:
        raise DomainError("gap must be nonnegative (ordered spectrum)")
    iv = GapInterval.from_pair(pair)
    if gap == iv.low or gap == iv.high:
        raise DomainError(
            f"gap {gap} is a breakpoint of the piecewise density; one-sided derivatives differ"
        )
    al, be = pair.alpha, pair.beta
    a_edge, b_edge = al + be, abs(al - be)
    slope = (
        -_sgn(a_edge - gap) + _sgn(a_edge + gap) + _sgn(b_edge - gap) - _sgn(b_edge + gap)
    ) / (4.0 * al * be)
    return -gap * slope


def _sgn(t: float) -> float:
    return math.copysign(1.0, t) if t != 0.0 else 0.0
