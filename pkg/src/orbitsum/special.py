"""Special functions: Hermite polynomials/functions, confluent hypergeometric
series, binary entropy with its antiderivatives, and adaptive quadrature.

``hermite_H``, ``pochhammer`` and ``confluent_F`` are written generically so
they stay exact when fed ``fractions.Fraction`` arguments; the rest is plain
float arithmetic.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, NumericsError

_QUAD_TOL = 1e-11
_QUAD_MAX_SPLITS = 1 << 20


def hermite_H(k: int, x):
    """Physicists' Hermite polynomial H_k(x) via the three-term recurrence.

    Exact for exact (int/Fraction) arguments.
    """
    if k < 0:
        raise DomainError("Hermite index must be nonnegative")
    if k == 0:
        return x * 0 + 1
    h_prev = x * 0 + 1
    h = 2 * x
    for j in range(1, k):
        h, h_prev = 2 * x * h - 2 * j * h_prev, h
    return h


def hermite_phi(k: int, x: float) -> float:
    """Normalized Hermite function phi_k(x) = (2^k k! sqrt(pi))^{-1/2} e^{-x^2/2} H_k(x).

    Evaluated with the recurrence on the normalized functions themselves
    (the normalizing prefactor is folded in step by step), which keeps the
    values bounded and overflow-free well past k = 200.
    """
    if k < 0:
        raise DomainError("Hermite index must be nonnegative")
    return _phi_iter(k + 1, x)[k]


def _phi_iter(count: int, x: float) -> list[float]:
    """First ``count`` normalized Hermite functions at x."""
    phi0 = math.pi ** -0.25 * math.exp(-0.5 * x * x)
    out = [phi0]
    if count == 1:
        return out
    out.append(math.sqrt(2.0) * x * phi0)
    for k in range(1, count - 1):
        nxt = x * math.sqrt(2.0 / (k + 1)) * out[k] - math.sqrt(k / (k + 1.0)) * out[k - 1]
        out.append(nxt)
    return out


def single_eigenvalue_density(n: int, x: float) -> float:
    """Density of one eigenvalue of a GUE(n) matrix: (1/n) sum_{k<n} phi_k(x)^2."""
    if n < 1:
        raise DomainError("n must be >= 1")
    phis = _phi_iter(n, x)
    return sum(p * p for p in phis) / n


def single_eigenvalue_density_alt(n: int, x: float) -> float:
    """Same density in its Christoffel-Darboux form phi_n^2 - sqrt(1+1/n) phi_{n-1} phi_{n+1}."""
    if n < 1:
        raise DomainError("n must be >= 1")
    phis = _phi_iter(n + 2, x)
    return phis[n] ** 2 - math.sqrt(1.0 + 1.0 / n) * phis[n - 1] * phis[n + 1]


def single_eigenvalue_density_sum(n: int, K: int, x: float) -> float:
    """Density of one eigenvalue of a sum of K i.i.d. GUE(n) matrices.

    Equals the single-matrix density rescaled by sqrt(K):
    (1/(n sqrt(K))) sum_{k<n} phi_k(x/sqrt(K))^2.
    """
    if K < 1:
        raise DomainError("K must be >= 1")
    s = math.sqrt(K)
    return single_eigenvalue_density(n, x / s) / s


def pochhammer(a, k: int):
    """Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1."""
    if k < 0:
        raise DomainError("Pochhammer index must be nonnegative")
    out = a * 0 + 1
    for j in range(k):
        out = out * (a + j)
    return out


def confluent_F(a, c, z):
    """Kummer's confluent hypergeometric series F(a, c; z) = sum (a)_k z^k / ((c)_k k!).

    When ``a`` is a nonpositive integer the series terminates after ``1 - a``
    terms and is evaluated as that exact finite sum (exact for Fraction
    inputs). Otherwise the series is summed to float convergence.
    """
    if isinstance(z, float) and not math.isfinite(z):
        raise DomainError("z must be finite")
    c_is_int = isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1) or (
        isinstance(c, float) and c == int(c)
    )
    if c_is_int and c <= 0:
        raise DomainError("c must not be a nonpositive integer")
    if isinstance(a, int) or (isinstance(a, Fraction) and a.denominator == 1):
        a = int(a)
        if a <= 0:
            total = z * 0 + 1
            term = total
            for k in range(-a):
                term = term * (a + k) * z / ((c + k) * (k + 1))
                total = total + term
            return total
    total = 1.0
    term = 1.0
    a, c, z = float(a), float(c), float(z)
    for k in range(1000):
        term *= (a + k) * z / ((c + k) * (k + 1))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise NumericsError("confluent hypergeometric series did not converge")


def binary_entropy(x: float) -> float:
    """Binary entropy -x ln x - (1-x) ln(1-x) in nats, with 0 ln 0 = 0."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy needs x in [0, 1], got {x}")
    return _xlog(x) + _xlog(1.0 - x)


def _xlog(t: float) -> float:
    return 0.0 if t == 0.0 else -t * math.log(t)


def F0(x: float) -> float:
    """Antiderivative of the binary entropy on [0, 1].

    F0(x) = (1-x)^2 [2 ln(1-x) - 1]/4 - x^2 (2 ln x - 1)/4, with the endpoint
    limits x^2 ln x -> 0 applied; satisfies F0(1-x) = -F0(x).
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"F0 needs x in [0, 1], got {x}")
    return _f0_half(1.0 - x) - _f0_half(x)


def _f0_half(t: float) -> float:
    # t^2 (2 ln t - 1) / 4 extended by 0 at t = 0
    if t == 0.0:
        return 0.0
    return 0.25 * t * t * (2.0 * math.log(t) - 1.0)


def F1(x: float) -> float:
    """Antiderivative of x times the binary entropy on [0, 1].

    Satisfies the reflection identity F1(x) - F1(1-x) = F0(x).
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"F1 needs x in [0, 1], got {x}")
    return _f0_half(1.0 - x) - _f1_third(1.0 - x) - _f1_third(x)


def _f1_third(t: float) -> float:
    # t^3 (3 ln t - 1) / 9 extended by 0 at t = 0
    if t == 0.0:
        return 0.0
    return t * t * t * (3.0 * math.log(t) - 1.0) / 9.0


_INITIAL_PANELS = 8


def integrate(f, a: float, b: float, tol: float = _QUAD_TOL, max_splits: int = _QUAD_MAX_SPLITS) -> float:
    """Adaptive Simpson quadrature of ``f`` on [a, b] to absolute tolerance ``tol``.

    The interval is seeded with a uniform 8-panel split before adaptive
    refinement (a single panel can be fooled by symmetric integrands whose
    probe points all sit near zeros).  Raises :class:`NumericsError` when the
    split budget is exhausted.  Suited to the smooth (up to integrable
    log-endpoint) integrands used here.
    """
    if a == b:
        return 0.0
    if b < a:
        return -integrate(f, b, a, tol=tol, max_splits=max_splits)
    panels = _INITIAL_PANELS
    edges = [a + (b - a) * i / panels for i in range(panels + 1)]
    edges[-1] = b
    values = [f(x) for x in edges]
    splits = 0
    total = 0.0
    stack = []
    for i in range(panels):
        lo, hi = edges[i], edges[i + 1]
        flo, fhi = values[i], values[i + 1]
        m = 0.5 * (lo + hi)
        fm = f(m)
        whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi)
        stack.append((lo, flo, hi, fhi, m, fm, whole, tol / panels))
    while stack:
        a0, fa0, b0, fb0, m0, fm0, whole0, tol0 = stack.pop()
        lm = 0.5 * (a0 + m0)
        rm = 0.5 * (m0 + b0)
        flm, frm = f(lm), f(rm)
        left = (m0 - a0) / 6.0 * (fa0 + 4.0 * flm + fm0)
        right = (b0 - m0) / 6.0 * (fm0 + 4.0 * frm + fb0)
        delta = left + right - whole0
        if abs(delta) <= 15.0 * tol0 or (b0 - a0) <= 1e-14 * (abs(a0) + abs(b0) + 1.0):
            total += left + right + delta / 15.0
        else:
            splits += 2
            if splits > max_splits:
                raise NumericsError(
                    f"adaptive quadrature exceeded {max_splits} subintervals (residual {abs(delta):.3e})"
                )
            half = 0.5 * tol0
            stack.append((a0, fa0, m0, fm0, lm, flm, left, half))
            stack.append((m0, fm0, b0, fb0, rm, frm, right, half))
    return total


def integrate_piecewise(f, points, tol: float = _QUAD_TOL) -> float:
    """Integrate ``f`` splitting exactly at interior breakpoints.

    ``points`` is the increasing sequence of endpoints including both limits.
    """
    pts = list(points)
    if len(pts) < 2:
        raise DomainError("need at least two endpoints")
    per_piece = tol / (len(pts) - 1)
    return sum(integrate(f, lo, hi, tol=per_piece) for lo, hi in zip(pts, pts[1:]) if hi > lo)


@dataclass(frozen=True)
class RealFunctionTable:
    """Sampled real function: strictly increasing abscissae with ordinates."""

    abscissae: tuple
    ordinates: tuple

    def __post_init__(self):
        if len(self.abscissae) != len(self.ordinates):
            raise DomainError("abscissae and ordinates must have equal length")
        if any(b <= a for a, b in zip(self.abscissae, self.abscissae[1:])):
            raise DomainError("abscissae must be strictly increasing")

    def write_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["x", "value"])
        for x, v in zip(self.abscissae, self.ordinates):
            writer.writerow([f"{x:.17g}", f"{v:.17g}"])
