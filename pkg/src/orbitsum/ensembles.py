"""GUE, complex Wishart, and fixed-spectrum orbit-sum samplers, together with
the closed-form joint eigenvalue densities of their K-fold sums."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .linalg import (
    HermitianMatrix,
    RandomStream,
    Spectrum,
    sample_haar_unitary,
    standard_complex_gaussian,
    vandermonde,
)
from .special import integrate


@dataclass(frozen=True)
class GueParams:
    n: int
    summand_count: int = 1

    def __post_init__(self):
        if self.n < 1 or self.summand_count < 1:
            raise DomainError("GUE parameters need n >= 1 and K >= 1")


@dataclass(frozen=True)
class WishartParams:
    m: int
    n: int
    summand_count: int = 1

    def __post_init__(self):
        if not 1 <= self.m <= self.n:
            raise DomainError(f"Wishart needs 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.summand_count < 1:
            raise DomainError("K must be >= 1")


def sample_gue(n: int, stream: RandomStream) -> HermitianMatrix:
    """One GUE(n) draw: (Z + Z^dagger)/2 for standard complex Gaussian Z.

    Diagonal entries are N(0, 1/2); off-diagonal entries are complex with
    total variance 1/2.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    z = standard_complex_gaussian(stream.generator, (n, n))
    return HermitianMatrix(0.5 * (z + z.conj().T))


def sample_wishart(m: int, n: int, stream: RandomStream) -> HermitianMatrix:
    """One complex Wishart draw W = Z Z^dagger with Z an m x n (m <= n) Gaussian."""
    if not 1 <= m <= n:
        raise DomainError(f"Wishart needs 1 <= m <= n, got m={m}, n={n}")
    z = standard_complex_gaussian(stream.generator, (m, n))
    return HermitianMatrix(z @ z.conj().T)


def sample_orbit_sum(a: Spectrum, b: Spectrum, stream: RandomStream) -> HermitianMatrix:
    """C = U diag(a) U^dagger + V diag(b) V^dagger with independent Haar U, V."""
    if a.dim != b.dim:
        raise DimensionError(f"spectra dims differ: {a.dim} vs {b.dim}")
    u = sample_haar_unitary(a.dim, stream)
    v = sample_haar_unitary(b.dim, stream)
    m = (u.mat * a.values) @ u.mat.conj().T + (v.mat * b.values) @ v.mat.conj().T
    return HermitianMatrix(0.5 * (m + m.conj().T))


def gue_sum_eigen_pdf(n: int, K: int, s) -> float:
    """Joint eigenvalue density of a sum of K i.i.d. GUE(n) matrices.

    (2/K)^{n(n-1)/2} (K pi)^{-n/2} (prod j!)^{-1} Delta(s)^2 exp(-<s,s>/K),
    a symmetric function normalized over all of R^n (unordered convention).
    The argument is sorted internally so permuted inputs give bit-identical
    values.
    """
    if n < 1 or K < 1:
        raise DomainError("n and K must be >= 1")
    s = sorted((float(v) for v in s), reverse=True)
    if len(s) != n:
        raise DimensionError(f"expected {n} eigenvalues, got {len(s)}")
    pairs = n * (n - 1) // 2
    log_norm = (
        pairs * math.log(2.0 / K)
        - 0.5 * n * math.log(K * math.pi)
        - sum(math.lgamma(j + 1) for j in range(1, n + 1))
    )
    return vandermonde(s) ** 2 * math.exp(log_norm - math.fsum(v * v for v in s) / K)


def wishart_sum_eigen_pdf(m: int, n: int, K: int, w) -> float:
    """Joint eigenvalue density of a sum of K complex Wishart (m x n) matrices.

    Delta(w)^2 prod_j w_j^{Kn-m} e^{-w_j} / prod_j Gamma(Kn-m+j) Gamma(1+j);
    symmetric, normalized over the positive orthant, and zero whenever any
    coordinate is negative.
    """
    if not 1 <= m <= n or K < 1:
        raise DomainError("need 1 <= m <= n and K >= 1")
    w = sorted((float(v) for v in w), reverse=True)
    if len(w) != m:
        raise DimensionError(f"expected {m} eigenvalues, got {len(w)}")
    if w[-1] < 0.0:
        return 0.0
    log_norm = -sum(
        math.lgamma(K * n - m + j) + math.lgamma(1 + j) for j in range(1, m + 1)
    )
    power = K * n - m
    if w[-1] == 0.0:
        if power > 0:
            return 0.0
        log_w_part = 0.0
    else:
        log_w_part = power * math.fsum(math.log(v) for v in w)
    return vandermonde(w) ** 2 * math.exp(log_norm + log_w_part - math.fsum(w))


def gue_sum_gap_marginal(K: int, gap: float, tol: float = 1e-10) -> float:
    """Density of the ordered eigenvalue gap for n = 2 GUE sums.

    Obtained by quadrature of the joint closed form over the mean coordinate:
    p(d) = 2 * int q(m + d/2, m - d/2) dm.
    """
    if K < 1:
        raise DomainError("K must be >= 1")
    if gap < 0:
        return 0.0
    radius = 7.0 * math.sqrt(K / 2.0) + 1.0
    # joint on the slice, inlined: (s1-s2)^2 exp(-(s1^2+s2^2)/K) / (K^2 pi)
    coeff = gap * gap / (K * K * math.pi) * math.exp(-0.5 * gap * gap / K)

    def joint_on_slice(m):
        return math.exp(-2.0 * m * m / K)

    return 2.0 * coeff * integrate(joint_on_slice, -radius, radius, tol=tol / max(coeff, 1e-300))


def wishart_sum_gap_marginal(n: int, K: int, gap: float, tol: float = 1e-10) -> float:
    """Density of the ordered eigenvalue gap for m = 2 Wishart sums.

    p(d) = 2 * int_0^inf q(v + d, v) dv by quadrature of the joint closed form.
    """
    if n < 2 or K < 1:
        raise DomainError("need n >= m = 2 and K >= 1")
    if gap < 0:
        return 0.0
    upper = 60.0 + 8.0 * K * n
    power = K * n - 2
    log_norm = -(math.lgamma(K * n - 1) + math.lgamma(K * n) + math.log(2.0))

    def joint_on_slice(v):
        # joint at (v + gap, v): gap^2 ((v+gap) v)^power e^{-2v-gap} * norm
        if v < 0.0:
            return 0.0
        base = ((v + gap) * v) ** power
        return gap * gap * base * math.exp(log_norm - 2.0 * v - gap)

    return 2.0 * integrate(joint_on_slice, 0.0, upper, tol=tol)
