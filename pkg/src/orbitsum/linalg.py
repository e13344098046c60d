"""Hermitian matrix substrate: types, eigendecomposition, Haar sampling.

Everything here is dense and small (dims up to ~16); the samplers in
:mod:`orbitsum.ensembles` and the batch kernels build on these primitives.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, DomainError

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-12

_UINT64 = 1 << 64


class Spectrum:
    """Real eigenvalue vector kept in non-increasing order.

    Input values are sorted descending on construction, so ``values[0]`` is
    always the largest eigenvalue.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("spectrum must be a non-empty 1-d real vector")
        if not np.all(np.isfinite(arr)):
            raise DomainError("spectrum entries must be finite")
        self.values = np.sort(arr)[::-1].copy()

    @property
    def dim(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def sum(self) -> float:
        return float(self.values.sum())

    def __eq__(self, other) -> bool:
        return isinstance(other, Spectrum) and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"Spectrum({self.values.tolist()})"


class HermitianMatrix:
    """Dense complex Hermitian matrix.

    Raw input is accepted when it is Hermitian up to ``HERMITIAN_TOL`` in
    max-entry norm and is then symmetrized exactly, so stored entries always
    satisfy ``mat == mat.conj().T``.
    """

    __slots__ = ("mat",)

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise DimensionError("Hermitian matrix must be square and non-empty")
        defect = np.max(np.abs(arr - arr.conj().T))
        if defect > HERMITIAN_TOL:
            raise DomainError(
                f"matrix is not Hermitian: max |H - H^dagger| = {defect:.3e} > {HERMITIAN_TOL:g}"
            )
        self.mat = 0.5 * (arr + arr.conj().T)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(self.mat.trace().real)

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        if self.dim != other.dim:
            raise DimensionError("dimension mismatch in matrix sum")
        return HermitianMatrix(self.mat + other.mat)

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


class UnitaryMatrix:
    """Complex unitary matrix, validated to ``UNITARY_TOL`` on construction."""

    __slots__ = ("mat",)

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise DimensionError("unitary matrix must be square and non-empty")
        defect = np.max(np.abs(arr.conj().T @ arr - np.eye(arr.shape[0])))
        if defect > UNITARY_TOL:
            raise DomainError(
                f"matrix is not unitary: max |U^dagger U - I| = {defect:.3e} > {UNITARY_TOL:g}"
            )
        self.mat = arr.copy()

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self) -> str:
        return f"UnitaryMatrix(dim={self.dim})"


class RandomStream:
    """Seeded, reproducible stream of random draws.

    Identical ``(seed, stream_id)`` pairs replay the identical draw sequence.
    Streams are stateful and must not be shared across concurrent workers;
    derive one per worker (or per chunk) with :meth:`substream`.
    """

    __slots__ = ("seed", "stream_id", "_jumps", "_generator")

    def __init__(self, seed: int = 0, stream_id: int = 0, _jumps: int = 0):
        for name, v in (("seed", seed), ("stream_id", stream_id)):
            if not (0 <= int(v) < _UINT64):
                raise DomainError(f"{name} must be an unsigned 64-bit integer")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._jumps = int(_jumps)
        self._generator = None

    @property
    def generator(self) -> np.random.Generator:
        """The underlying numpy generator (created lazily, then consumed statefully)."""
        if self._generator is None:
            bitgen = np.random.Philox(key=[self.seed, self.stream_id])
            if self._jumps:
                bitgen = bitgen.jumped(self._jumps)
            self._generator = np.random.Generator(bitgen)
        return self._generator

    def substream(self, index: int) -> "RandomStream":
        """Independent child stream number ``index`` (Philox counter jump).

        Children are pairwise independent and independent of the parent; the
        mapping depends only on ``(seed, stream_id, index)``.
        """
        if index < 0:
            raise DomainError("substream index must be nonnegative")
        return RandomStream(self.seed, self.stream_id, _jumps=self._jumps + 1 + index)

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id})"


def eigh(h: HermitianMatrix) -> tuple[Spectrum, UnitaryMatrix]:
    """Eigendecomposition ``h = U diag(s) U^dagger`` with ``s`` descending."""
    if not isinstance(h, HermitianMatrix):
        h = HermitianMatrix(h)
    w, v = np.linalg.eigh(h.mat)
    return Spectrum(w[::-1]), UnitaryMatrix(np.ascontiguousarray(v[:, ::-1]))


def sample_haar_unitary(dim: int, stream: RandomStream) -> UnitaryMatrix:
    """Draw a Haar-distributed unitary.

    QR-decomposes a standard complex Gaussian matrix and rescales Q by the
    phases of R's diagonal; without that phase correction the result is not
    Haar-distributed.
    """
    if dim < 1:
        raise DomainError("dim must be >= 1")
    gen = stream.generator
    z = standard_complex_gaussian(gen, (dim, dim))
    return UnitaryMatrix(_haar_from_ginibre(z))


def _haar_from_ginibre(z: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., np.newaxis, :]


def standard_complex_gaussian(gen: np.random.Generator, shape) -> np.ndarray:
    """i.i.d. standard complex Gaussians: Re and Im parts are N(0, 1/2)."""
    re = gen.standard_normal(shape)
    im = gen.standard_normal(shape)
    return (re + 1j * im) / math.sqrt(2.0)


def conjugate_orbit(a: Spectrum, u: UnitaryMatrix) -> HermitianMatrix:
    """Point ``U diag(a) U^dagger`` on the unitary orbit with spectrum ``a``."""
    if a.dim != u.dim:
        raise DimensionError(f"spectrum dim {a.dim} != unitary dim {u.dim}")
    m = (u.mat * a.values) @ u.mat.conj().T
    return HermitianMatrix(0.5 * (m + m.conj().T))


def matrix_exp(h: HermitianMatrix) -> HermitianMatrix:
    """Matrix exponential via eigendecomposition; always Hermitian positive definite."""
    if not isinstance(h, HermitianMatrix):
        h = HermitianMatrix(h)
    w, v = np.linalg.eigh(h.mat)
    m = (v * np.exp(w)) @ v.conj().T
    return HermitianMatrix(0.5 * (m + m.conj().T))


def vandermonde(x) -> float:
    """Vandermonde product ``prod_{i<j} (x_i - x_j)``."""
    xs = [float(v) for v in x]
    out = 1.0
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            out *= xs[i] - xs[j]
    return out
