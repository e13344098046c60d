"""Pure-numpy batch kernels (fallback when the compiled extension is absent).

Every kernel consumes a pre-drawn array of standard normals with the layout
documented in the package ``__init__``; the compiled backend consumes the
identical layout, so both backends see the same random inputs and differ only
by floating-point rounding of the downstream linear algebra.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"


def _unit_vectors(z: np.ndarray) -> np.ndarray:
    """(N, 4) normals -> (N, 2) complex unit vectors, Haar on the sphere."""
    u = np.empty((z.shape[0], 2), dtype=complex)
    u[:, 0] = z[:, 0] + 1j * z[:, 1]
    u[:, 1] = z[:, 2] + 1j * z[:, 3]
    norm = np.sqrt(np.abs(u[:, 0]) ** 2 + np.abs(u[:, 1]) ** 2)
    return u / norm[:, None]


def orbit_sum_2x2(a1, a2, b1, b2, z):
    """Gap and first diagonal entry of U diag(a) U^dag + V diag(b) V^dag, n = 2.

    Only the first Haar column enters the conjugation, so each unitary is
    realized as a random complex unit vector.
    Returns (gaps, c11) for z of shape (N, 8).
    """
    alpha = a1 - a2
    beta = b1 - b2
    u = _unit_vectors(z[:, 0:4])
    v = _unit_vectors(z[:, 4:8])
    c00 = a2 + b2 + alpha * np.abs(u[:, 0]) ** 2 + beta * np.abs(v[:, 0]) ** 2
    c11 = a2 + b2 + alpha * np.abs(u[:, 1]) ** 2 + beta * np.abs(v[:, 1]) ** 2
    c01 = alpha * u[:, 0] * u[:, 1].conj() + beta * v[:, 0] * v[:, 1].conj()
    gaps = np.sqrt((c00 - c11) ** 2 + 4.0 * np.abs(c01) ** 2)
    return gaps, c00


def mixture_2x2(mu, nu, z):
    """Equal mixture of two Haar-conjugated qubit states diag(1-mu, mu), diag(1-nu, nu).

    Returns (lam_lo, x): the smaller eigenvalue and the second diagonal entry
    of the mixture, for z of shape (N, 8).
    """
    u = _unit_vectors(z[:, 0:4])
    v = _unit_vectors(z[:, 4:8])
    wu = 1.0 - 2.0 * mu
    wv = 1.0 - 2.0 * nu
    r00 = 0.5 * (mu + wu * np.abs(u[:, 0]) ** 2) + 0.5 * (nu + wv * np.abs(v[:, 0]) ** 2)
    r01 = 0.5 * wu * u[:, 0] * u[:, 1].conj() + 0.5 * wv * v[:, 0] * v[:, 1].conj()
    x = 1.0 - r00
    gap = np.sqrt((2.0 * r00 - 1.0) ** 2 + 4.0 * np.abs(r01) ** 2)
    lam_lo = 0.5 * (1.0 - gap)
    return lam_lo, x


def _gue_batch(n: int, z: np.ndarray) -> np.ndarray:
    """(N, n*n) normals -> (N, n, n) GUE matrices (diagonal N(0,1/2))."""
    N = z.shape[0]
    h = np.zeros((N, n, n), dtype=complex)
    idx = np.arange(n)
    h[:, idx, idx] = z[:, :n] / math.sqrt(2.0)
    col = n
    for i in range(n):
        for j in range(i + 1, n):
            re = 0.5 * z[:, col]
            im = 0.5 * z[:, col + 1]
            col += 2
            h[:, i, j] = re + 1j * im
            h[:, j, i] = re - 1j * im
    return h


def gue_sum_eigs(n: int, K: int, z: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a sum of K i.i.d. GUE(n) draws; z is (N, K*n*n)."""
    width = n * n
    h = _gue_batch(n, z[:, :width])
    for k in range(1, K):
        h += _gue_batch(n, z[:, k * width:(k + 1) * width])
    return np.linalg.eigvalsh(h)[:, ::-1]


def _wishart_batch(m: int, n: int, z: np.ndarray) -> np.ndarray:
    N = z.shape[0]
    re = z[:, : m * n].reshape(N, m, n)
    im = z[:, m * n: 2 * m * n].reshape(N, m, n)
    g = (re + 1j * im) / math.sqrt(2.0)
    return g @ g.conj().transpose(0, 2, 1)


def wishart_sum_eigs(m: int, n: int, K: int, z: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a sum of K complex Wishart draws; z is (N, K*2*m*n)."""
    width = 2 * m * n
    w = _wishart_batch(m, n, z[:, :width])
    for k in range(1, K):
        w += _wishart_batch(m, n, z[:, k * width:(k + 1) * width])
    return np.linalg.eigvalsh(w)[:, ::-1]


def gt_traces(n: int, t: float, z: np.ndarray):
    """Per-draw (Tr e^{tX} e^{tY}, Tr e^{t(X+Y)}) for independent GUE(n) X, Y.

    z is (N, 2*n*n).  Uses eigendecompositions, so the first trace is
    sum_{ij} e^{t xi_i} e^{t eta_j} |<u_i, v_j>|^2.
    """
    width = n * n
    x = _gue_batch(n, z[:, :width])
    y = _gue_batch(n, z[:, width:])
    wx, vx = np.linalg.eigh(x)
    wy, vy = np.linalg.eigh(y)
    overlap = np.abs(vx.conj().transpose(0, 2, 1) @ vy) ** 2
    tr_prod = np.einsum("ni,nij,nj->n", np.exp(t * wx), overlap, np.exp(t * wy))
    tr_sum = np.exp(t * np.linalg.eigvalsh(x + y)).sum(axis=1)
    return tr_prod, tr_sum
