"""Qubit orbit mixtures: eigenvalue/diagonal laws of the equal mixture of two
Haar-conjugated qubit states, average quantum Jensen-Shannon divergence,
average relative-entropy coherence, and the entropy utilities behind them.

Entropies are in nats throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DimensionError, DomainError
from .linalg import RandomStream
from .special import F0, F1, binary_entropy, integrate_piecewise

PSD_TOL = 1e-12


@dataclass(frozen=True)
class OrbitParams:
    """Qubit orbit pair: spectra diag(1-mu, mu) and diag(1-nu, nu).

    The domain is the half-open square [0, 1/2)^2.  A parameter exactly 1/2
    collapses that orbit to the maximally mixed point and the eigenvalue law
    degenerates to a point mass with a 0/0 prefactor, so it is rejected; the
    boundary values quoted as limits live in :data:`CORNER_LIMITS`.
    """

    mu: float
    nu: float

    def __post_init__(self):
        for name, v in (("mu", self.mu), ("nu", self.nu)):
            if not 0.0 <= v < 0.5:
                raise DomainError(f"{name} must lie in [0, 1/2), got {v}")

    @property
    def denom(self) -> float:
        return (0.5 - self.mu) * (0.5 - self.nu)


@dataclass(frozen=True)
class Thresholds:
    """Support breakpoints T0 = (mu+nu)/2 and T1 = (1-|mu-nu|)/2."""

    t0: float
    t1: float

    def __post_init__(self):
        if not 0.0 <= self.t0 <= self.t1 <= 0.5:
            raise DomainError("need 0 <= T0 <= T1 <= 1/2")


def thresholds(p: OrbitParams) -> Thresholds:
    return Thresholds(t0=0.5 * (p.mu + p.nu), t1=0.5 * (1.0 - abs(p.mu - p.nu)))


def eigen_mix_pdf(p: OrbitParams, lam: float) -> float:
    """Density of an eigenvalue of (U rho1 U^dag + V rho2 V^dag)/2 over Haar U, V.

    Two mirror branches: (1/2 - lam)/denom on [T0, T1] and (lam - 1/2)/denom
    on [1 - T1, 1 - T0]; zero elsewhere on [0, 1].  Both eigenvalues lam and
    1 - lam of a draw together follow this law with weight 1/2 each.
    """
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"eigenvalue must lie in [0, 1], got {lam}")
    th = thresholds(p)
    if th.t0 <= lam <= th.t1:
        return (0.5 - lam) / p.denom
    if 1.0 - th.t1 <= lam <= 1.0 - th.t0:
        return (lam - 0.5) / p.denom
    return 0.0


def diag_mix_pdf(p: OrbitParams, x: float) -> float:
    """Density of the second diagonal entry of the mixture: a symmetric trapezoid.

    Rises as (x - T0), sits flat at (T1 - T0), falls as (1 - T0 - x), all over
    (1/2-mu)(1/2-nu); supported on [T0, 1 - T0].
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"diagonal entry must lie in [0, 1], got {x}")
    th = thresholds(p)
    if x < th.t0 or x > 1.0 - th.t0:
        return 0.0
    if x <= th.t1:
        return (x - th.t0) / p.denom
    if x <= 1.0 - th.t1:
        return (th.t1 - th.t0) / p.denom
    return (1.0 - th.t0 - x) / p.denom


def diag_mix_pdf_absolute_form(p: OrbitParams, x: float) -> float:
    """The same trapezoid written with four absolute values and a 1/2 prefactor.

    Kept separately so the two printed forms can be checked against each
    other; the piecewise form above is the normalized reference.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"diagonal entry must lie in [0, 1], got {x}")
    th = thresholds(p)
    return (
        abs(x - th.t0) + abs(x - (1.0 - th.t0)) - abs(x - th.t1) - abs(x - (1.0 - th.t1))
    ) / (2.0 * p.denom)


def _phi_big(p: OrbitParams) -> float:
    th = thresholds(p)
    return F1(th.t0) + F1(1.0 - th.t0) - F1(th.t1) - F1(1.0 - th.t1)


def qjsd_average(p: OrbitParams) -> float:
    """Haar-average quantum Jensen-Shannon divergence between the two orbits.

    Closed form: [F1(T0)+F1(1-T0)-F1(T1)-F1(1-T1)]/denom - H2(mu)/2 - H2(nu)/2.
    """
    return _phi_big(p) / p.denom - 0.5 * binary_entropy(p.mu) - 0.5 * binary_entropy(p.nu)


def coherence_average(p: OrbitParams) -> float:
    """Haar-average relative-entropy coherence of the equal orbit mixture.

    Closed form: [(2 T0 - 1) F0(T0) - (2 T1 - 1) F0(T1) - 2 Phi]/denom with
    Phi the F1 combination from the QJSD average.
    """
    th = thresholds(p)
    num = (2.0 * th.t0 - 1.0) * F0(th.t0) - (2.0 * th.t1 - 1.0) * F0(th.t1) - 2.0 * _phi_big(p)
    return num / p.denom


def _entropy_against_eigen_law(p: OrbitParams) -> float:
    """int H2(lam) p(lam) dlam by quadrature split at the breakpoints."""
    th = thresholds(p)
    points = sorted({0.0, th.t0, th.t1, 1.0 - th.t1, 1.0 - th.t0, 1.0})
    return integrate_piecewise(lambda lam: binary_entropy(lam) * eigen_mix_pdf(p, lam), points)


def _entropy_against_diag_law(p: OrbitParams) -> float:
    th = thresholds(p)
    points = sorted({0.0, th.t0, th.t1, 1.0 - th.t1, 1.0 - th.t0, 1.0})
    return integrate_piecewise(lambda x: binary_entropy(x) * diag_mix_pdf(p, x), points)


def qjsd_average_quadrature(p: OrbitParams) -> float:
    """Defining-integral form of the QJSD average (independent of F0/F1)."""
    return (
        _entropy_against_eigen_law(p)
        - 0.5 * binary_entropy(p.mu)
        - 0.5 * binary_entropy(p.nu)
    )


def coherence_average_quadrature(p: OrbitParams) -> float:
    """Defining-integral form of the coherence average: int H2 q - int H2 p."""
    return _entropy_against_diag_law(p) - _entropy_against_eigen_law(p)


#: Boundary values quoted as limits of the closed forms (the formulas
#: themselves are 0/0 at these corners and are not evaluated there).
CORNER_LIMITS = {
    "qjsd": {
        (0.0, 0.0): math.log(2.0) / 3.0 + 1.0 / 6.0,
        (0.0, 0.5): -0.75 * math.log(0.75),
        (0.5, 0.0): -0.75 * math.log(0.75),
        (0.5, 0.5): 0.0,
    },
    "coherence": {
        (0.0, 0.0): 2.0 / 3.0 * (1.0 - math.log(2.0)),
        (0.0, 0.5): 0.5 - 0.375 * math.log(3.0),
        (0.5, 0.0): 0.5 - 0.375 * math.log(3.0),
        (0.5, 0.5): 0.0,
    },
}


class DensityMatrix2:
    """2x2 density matrix: Hermitian, unit trace, positive semi-definite."""

    __slots__ = ("mat",)

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=complex)
        if arr.shape != (2, 2):
            raise DimensionError("density matrix must be 2x2")
        if np.max(np.abs(arr - arr.conj().T)) > PSD_TOL:
            raise DomainError("density matrix must be Hermitian")
        arr = 0.5 * (arr + arr.conj().T)
        if abs(arr.trace().real - 1.0) > PSD_TOL:
            raise DomainError(f"density matrix must have unit trace, got {arr.trace().real}")
        if np.linalg.eigvalsh(arr).min() < -PSD_TOL:
            raise DomainError("density matrix must be positive semi-definite")
        self.mat = arr

    @classmethod
    def from_spectrum_value(cls, x: float) -> "DensityMatrix2":
        return cls(np.diag([1.0 - x, x]))

    def eigenvalues(self) -> np.ndarray:
        return np.clip(np.linalg.eigvalsh(self.mat), 0.0, None)

    def diagonal_part(self) -> "DensityMatrix2":
        return DensityMatrix2(np.diag(np.diag(self.mat)))


def von_neumann_entropy(rho: DensityMatrix2) -> float:
    """S(rho) = -Tr rho ln rho."""
    return float(sum(-lam * math.log(lam) for lam in rho.eigenvalues() if lam > 0.0))


def relative_entropy(rho: DensityMatrix2, sigma: DensityMatrix2) -> float:
    """S(rho || sigma) = Tr rho (ln rho - ln sigma); needs supp(rho) <= supp(sigma)."""
    w, v = np.linalg.eigh(sigma.mat)
    tr_rho_log_sigma = 0.0
    for k in range(2):
        weight = float((v[:, k].conj() @ rho.mat @ v[:, k]).real)
        if w[k] <= PSD_TOL:
            if weight > 1e-10:
                raise DomainError(
                    "support violation: rho has weight on the kernel of sigma "
                    "(relative entropy is infinite)"
                )
            continue
        tr_rho_log_sigma += weight * math.log(w[k])
    return -von_neumann_entropy(rho) - tr_rho_log_sigma


def coherence(rho: DensityMatrix2) -> float:
    """Relative-entropy coherence C(rho) = S(rho_diag) - S(rho)."""
    return von_neumann_entropy(rho.diagonal_part()) - von_neumann_entropy(rho)


def qjsd(rho1: DensityMatrix2, rho2: DensityMatrix2) -> float:
    """Quantum Jensen-Shannon divergence (S(rho1||m) + S(rho2||m))/2, m the mixture."""
    mixture = DensityMatrix2(0.5 * rho1.mat + 0.5 * rho2.mat)
    return 0.5 * relative_entropy(rho1, mixture) + 0.5 * relative_entropy(rho2, mixture)


def _binary_entropy_arr(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    out = np.zeros_like(x)
    for t in (x, 1.0 - x):
        pos = t > 0.0
        out[pos] -= t[pos] * np.log(t[pos])
    return out


def _empirical_mean(p: OrbitParams, samples: int, stream: RandomStream, per_draw, workers: int):
    if samples < 1:
        raise DomainError("samples must be >= 1")
    total = 0.0
    total_sq = 0.0
    sizes = kernels.chunk_sizes(samples)
    for index, count in enumerate(sizes):
        gen = stream.substream(index).generator
        z = gen.standard_normal((count, 8))
        lam, x = kernels.mixture_2x2(p.mu, p.nu, z)
        vals = per_draw(lam, x)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    stderr = math.sqrt(var / samples)
    return mean, stderr


def qjsd_empirical(
    p: OrbitParams, samples: int, stream: RandomStream, workers: int = 1
) -> tuple[float, float]:
    """Monte Carlo mean and standard error of the QJSD between the two orbits.

    Uses QJSD = S(mixture) - H2(mu)/2 - H2(nu)/2 per draw.
    """
    offset = 0.5 * binary_entropy(p.mu) + 0.5 * binary_entropy(p.nu)

    def per_draw(lam, x):
        return _binary_entropy_arr(lam) - offset

    return _empirical_mean(p, samples, stream, per_draw, workers)


def coherence_empirical(
    p: OrbitParams, samples: int, stream: RandomStream, workers: int = 1
) -> tuple[float, float]:
    """Monte Carlo mean and standard error of the mixture coherence H2(x) - H2(lam)."""

    def per_draw(lam, x):
        return _binary_entropy_arr(x) - _binary_entropy_arr(lam)

    return _empirical_mean(p, samples, stream, per_draw, workers)


def surface_rows(kind: str, steps: int):
    """(mu, nu, value) rows on the uniform steps x steps grid over [0, 1/2)^2.

    Grid points are i/(2 steps) for i = 0..steps-1 along each axis.
    """
    if steps < 1:
        raise DomainError("steps must be >= 1")
    fn = {"qjsd": qjsd_average, "coherence": coherence_average}.get(kind)
    if fn is None:
        raise DomainError(f"unknown surface kind {kind!r}; expected qjsd or coherence")
    rows = []
    for i in range(steps):
        for j in range(steps):
            mu = 0.5 * i / steps
            nu = 0.5 * j / steps
            rows.append((mu, nu, fn(OrbitParams(mu, nu))))
    return rows
