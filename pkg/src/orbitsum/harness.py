"""Experiment orchestration: seeded sampling loops, histograms, and
goodness-of-fit comparisons binding each sampler to its analytic density.

Randomness is keyed by (seed, stream_id, chunk index), so results depend only
on the seed and parameters, never on the worker count; per-chunk histograms
are merged by plain integer addition.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels, qinfo
from .ensembles import (
    gue_sum_gap_marginal,
    wishart_sum_eigen_pdf,
    wishart_sum_gap_marginal,
)
from .errors import DomainError
from .horn import GapInterval, SpectrumPair2, diag_pdf_2x2, eigen_gap_pdf_2x2
from .linalg import RandomStream, Spectrum
from .special import integrate, single_eigenvalue_density_sum

EXPERIMENT_KINDS = (
    "orbit-sum-gap",
    "orbit-sum-diag",
    "gue-sum",
    "wishart-sum",
    "eigen-mix",
    "diag-mix",
)

DEFAULT_BINS = 200
KS_DEFAULT_THRESHOLD = 0.01  # at 1e5 draws; ~2.3x the alpha=0.01 critical value
RANGE_PAD = 0.10
MIN_ANALYTIC_MASS = 0.999


@dataclass
class Histogram:
    """Fixed-range histogram with explicit under/overflow accounting."""

    lo: float
    hi: float
    counts: np.ndarray
    underflow: int = 0
    overflow: int = 0
    total: int = 0

    @classmethod
    def empty(cls, lo: float, hi: float, bins: int) -> "Histogram":
        if not lo < hi:
            raise DomainError("histogram needs lo < hi")
        if bins < 2:
            raise DomainError("histogram needs at least 2 bins")
        return cls(lo=float(lo), hi=float(hi), counts=np.zeros(bins, dtype=np.int64))

    @property
    def bin_count(self) -> int:
        return int(self.counts.size)

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.bin_count + 1)

    def add(self, values) -> None:
        v = np.asarray(values, dtype=float).ravel()
        self.underflow += int((v < self.lo).sum())
        self.overflow += int((v > self.hi).sum())
        inside = v[(v >= self.lo) & (v <= self.hi)]
        c, _ = np.histogram(inside, bins=self.bin_count, range=(self.lo, self.hi))
        self.counts += c
        self.total += v.size

    def conserved(self) -> bool:
        return int(self.counts.sum()) + self.underflow + self.overflow == self.total

    def write_csv(self, stream, analytic_masses=None) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["bin_lo", "bin_hi", "count", "analytic_mass"])
        edges = self.edges
        masses = analytic_masses if analytic_masses is not None else [float("nan")] * self.bin_count
        for i in range(self.bin_count):
            writer.writerow(
                [f"{edges[i]:.17g}", f"{edges[i + 1]:.17g}", int(self.counts[i]), f"{masses[i]:.17g}"]
            )


@dataclass
class ComparisonReport:
    """Goodness of fit between a histogram and an analytic density."""

    ks_statistic: float
    l1_distance: float
    sample_count: int
    density_id: str
    analytic_mass: float = field(default=float("nan"))

    def to_json(self) -> str:
        return json.dumps(
            {
                "density_id": self.density_id,
                "ks_statistic": self.ks_statistic,
                "l1_distance": self.l1_distance,
                "sample_count": self.sample_count,
                "analytic_mass": self.analytic_mass,
            }
        )


class _Experiment:
    """Sampling recipe: normals width, draw map, analytic support and density."""

    def __init__(self, width, mapper, support, density, density_id):
        self.width = width
        self.mapper = mapper
        self.support = support
        self.density = density
        self.density_id = density_id


def _orbit_pair(params) -> SpectrumPair2:
    pair = SpectrumPair2(Spectrum(params["a"]), Spectrum(params["b"]))
    pair.require_nondegenerate()
    return pair


def _experiment(kind: str, params: dict) -> _Experiment:
    if kind == "orbit-sum-gap":
        pair = _orbit_pair(params)
        iv = GapInterval.from_pair(pair)

        def density(d, pair=pair):
            return eigen_gap_pdf_2x2(pair, d) if d >= 0 else 0.0

        return _Experiment(
            8,
            lambda z, pair=pair: kernels.orbit_sum_2x2(pair.a[0], pair.a[1], pair.b[0], pair.b[1], z)[0],
            (iv.low, iv.high),
            density,
            f"horn-gap(a={list(pair.a)}, b={list(pair.b)})",
        )
    if kind == "orbit-sum-diag":
        pair = _orbit_pair(params)
        tr = pair.trace_sum
        half_width = 0.5 * (pair.alpha + pair.beta)

        def density(x, pair=pair, tr=tr):
            return diag_pdf_2x2(pair, x, tr)

        return _Experiment(
            8,
            lambda z, pair=pair: kernels.orbit_sum_2x2(pair.a[0], pair.a[1], pair.b[0], pair.b[1], z)[1],
            (0.5 * tr - half_width, 0.5 * tr + half_width),
            density,
            f"horn-diag(a={list(pair.a)}, b={list(pair.b)})",
        )
    if kind == "gue-sum":
        n, K = int(params["n"]), int(params["k"])
        if n < 1 or K < 1:
            raise DomainError("gue-sum needs n >= 1 and k >= 1")
        width = kernels.normals_per_draw("gue_sum_eigs", n=n, K=K)
        if n == 2:
            radius = 6.0 * math.sqrt(2.0 * K)
            return _Experiment(
                width,
                lambda z: np.subtract(*kernels.gue_sum_eigs(2, K, z).T),
                (0.0, radius),
                lambda d: gue_sum_gap_marginal(K, d) if d >= 0 else 0.0,
                f"gue-sum-gap(n=2, K={K})",
            )
        radius = math.sqrt(K) * (math.sqrt(2.0 * n) + 4.0)
        return _Experiment(
            width,
            lambda z: kernels.gue_sum_eigs(n, K, z).ravel(),
            (-radius, radius),
            lambda x: single_eigenvalue_density_sum(n, K, x),
            f"gue-sum-single-eig(n={n}, K={K})",
        )
    if kind == "wishart-sum":
        m, n, K = int(params["m"]), int(params["n"]), int(params["k"])
        if not 1 <= m <= n or K < 1:
            raise DomainError("wishart-sum needs 1 <= m <= n and k >= 1")
        width = kernels.normals_per_draw("wishart_sum_eigs", m=m, n=n, K=K)
        scale = K * n
        if m == 1:
            hi = scale + 12.0 * math.sqrt(scale) + 25.0
            return _Experiment(
                width,
                lambda z: kernels.wishart_sum_eigs(1, n, K, z).ravel(),
                (0.0, hi),
                lambda w: wishart_sum_eigen_pdf(1, n, K, (w,)) if w >= 0 else 0.0,
                f"wishart-sum-eig(m=1, n={n}, K={K})",
            )
        if m == 2:
            hi = 4.0 * scale + 40.0
            return _Experiment(
                width,
                lambda z: np.subtract(*kernels.wishart_sum_eigs(2, n, K, z).T[:2]),
                (0.0, hi),
                lambda d: wishart_sum_gap_marginal(n, K, d) if d >= 0 else 0.0,
                f"wishart-sum-gap(m=2, n={n}, K={K})",
            )
        raise DomainError("wishart-sum verification supports m in {1, 2} (no closed 1-d marginal beyond)")
    if kind == "eigen-mix":
        p = qinfo.OrbitParams(params["mu"], params["nu"])
        th = qinfo.thresholds(p)

        def both_eigs(z, p=p):
            lam, _ = kernels.mixture_2x2(p.mu, p.nu, z)
            return np.concatenate([lam, 1.0 - lam])

        def density(lam, p=p):
            return qinfo.eigen_mix_pdf(p, lam) if 0.0 <= lam <= 1.0 else 0.0

        return _Experiment(
            8, both_eigs, (th.t0, 1.0 - th.t0), density, f"eigen-mix(mu={p.mu}, nu={p.nu})"
        )
    if kind == "diag-mix":
        p = qinfo.OrbitParams(params["mu"], params["nu"])
        th = qinfo.thresholds(p)

        def density(x, p=p):
            return qinfo.diag_mix_pdf(p, x) if 0.0 <= x <= 1.0 else 0.0

        return _Experiment(
            8,
            lambda z, p=p: kernels.mixture_2x2(p.mu, p.nu, z)[1],
            (th.t0, 1.0 - th.t0),
            density,
            f"diag-mix(mu={p.mu}, nu={p.nu})",
        )
    raise DomainError(f"unknown experiment kind {kind!r}; expected one of {EXPERIMENT_KINDS}")


def run_experiment(
    kind: str,
    params: dict,
    samples: int,
    stream: RandomStream,
    bins: int = DEFAULT_BINS,
    workers: int = 1,
) -> Histogram:
    """Sample ``samples`` draws of ``kind`` into a histogram.

    The range is the analytic support padded by 10% on each side.  Identical
    (seed, params) reproduce bit-identical histograms for any worker count.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    if workers < 1:
        raise DomainError("workers must be >= 1")
    spec = _experiment(kind, params)
    lo, hi = spec.support
    pad = RANGE_PAD * (hi - lo)
    hist = Histogram.empty(lo - pad, hi + pad, bins)
    sizes = kernels.chunk_sizes(samples)

    def one_chunk(index: int):
        gen = stream.substream(index).generator
        z = gen.standard_normal((sizes[index], spec.width))
        return spec.mapper(z)

    if workers == 1:
        for index in range(len(sizes)):
            hist.add(one_chunk(index))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for values in pool.map(one_chunk, range(len(sizes))):
                hist.add(values)
    return hist


def compare_to_density(hist: Histogram, density, density_id: str = "density") -> ComparisonReport:
    """KS and L1 distances between a histogram and an analytic density.

    The analytic CDF is integrated bin by bin; rejects when the density puts
    less than 99.9% of its mass inside the histogram range (range too small)
    or when the histogram is empty.
    """
    if hist.total == 0:
        raise DomainError("cannot compare an empty histogram")
    edges = hist.edges
    masses = np.array(
        [integrate(density, edges[i], edges[i + 1], tol=1e-10) for i in range(hist.bin_count)]
    )
    mass_total = float(masses.sum())
    if mass_total < MIN_ANALYTIC_MASS:
        raise DomainError(
            f"analytic density integrates to {mass_total:.6f} < {MIN_ANALYTIC_MASS} "
            "over the histogram range; range too small"
        )
    n = hist.total
    ecdf = (hist.underflow + np.concatenate([[0], np.cumsum(hist.counts)])) / n
    acdf = np.concatenate([[0.0], np.cumsum(masses)])
    ks = float(np.max(np.abs(ecdf - acdf)))
    l1 = float(np.abs(hist.counts / n - masses).sum())
    return ComparisonReport(
        ks_statistic=ks,
        l1_distance=l1,
        sample_count=n,
        density_id=density_id,
        analytic_mass=mass_total,
    )


def verify(
    kind: str,
    params: dict,
    samples: int,
    stream: RandomStream,
    bins: int = DEFAULT_BINS,
    workers: int = 1,
) -> tuple[Histogram, ComparisonReport]:
    """Run one experiment and compare it against its bound analytic density."""
    spec = _experiment(kind, params)
    hist = run_experiment(kind, params, samples, stream, bins=bins, workers=workers)
    report = compare_to_density(hist, spec.density, spec.density_id)
    return hist, report


def analytic_bin_masses(kind: str, params: dict, hist: Histogram) -> np.ndarray:
    """Per-bin analytic masses for CSV emission next to empirical counts."""
    spec = _experiment(kind, params)
    edges = hist.edges
    return np.array(
        [integrate(spec.density, edges[i], edges[i + 1], tol=1e-10) for i in range(hist.bin_count)]
    )
