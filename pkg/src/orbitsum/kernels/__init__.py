"""Batch Monte Carlo kernels with a compiled fast path.

The compiled Cython core is used when its extension module imported cleanly;
otherwise the numpy fallback takes over.  Both backends implement the same
functions over the same pre-drawn standard-normal layouts:

======================  =========================  =======================================
kernel                  normals per draw           layout per draw
======================  =========================  =======================================
orbit_sum_2x2           8                          4 for each unit vector (re, im, re, im)
mixture_2x2             8                          as above
gue_sum_eigs            K * n^2                    per matrix: n diagonal, then (re, im)
                                                   for each pair i < j in lex order
wishart_sum_eigs        K * 2*m*n                  per matrix: m*n Re(Z) row-major, then
                                                   m*n Im(Z)
gt_traces               2 * n^2                    two GUE layouts
======================  =========================  =======================================

Because the random inputs are drawn upstream (from :class:`~orbitsum.linalg.
RandomStream`), the two backends see identical randomness and differ only by
floating-point rounding; results are bit-reproducible per backend.
"""

from . import fallback

try:  # pragma: no cover - exercised only when the extension is built
    from . import _core

    _impl = _core
except ImportError:  # pragma: no cover
    _core = None
    _impl = fallback

BACKEND = _impl.BACKEND_NAME

orbit_sum_2x2 = _impl.orbit_sum_2x2
mixture_2x2 = _impl.mixture_2x2
gue_sum_eigs = _impl.gue_sum_eigs
wishart_sum_eigs = _impl.wishart_sum_eigs
gt_traces = _impl.gt_traces


def normals_per_draw(kind: str, **params) -> int:
    """Width of the standard-normal block each draw of ``kind`` consumes."""
    if kind in ("orbit_sum_2x2", "mixture_2x2"):
        return 8
    if kind == "gue_sum_eigs":
        return params["K"] * params["n"] ** 2
    if kind == "wishart_sum_eigs":
        return params["K"] * 2 * params["m"] * params["n"]
    if kind == "gt_traces":
        return 2 * params["n"] ** 2
    raise ValueError(f"unknown kernel kind {kind!r}")


def available_backends() -> dict:
    """Importable backend modules keyed by name (for tests and benchmarks)."""
    out = {fallback.BACKEND_NAME: fallback}
    if _core is not None:
        out[_core.BACKEND_NAME] = _core
    return out


CHUNK_DRAWS = 4096


def chunk_sizes(samples: int) -> list:
    """Fixed-size draw chunks; chunk ``c`` always covers the same draw indices.

    Randomness is keyed to the chunk index (one substream per chunk), so
    totals are independent of how chunks are distributed over workers.
    """
    full, rem = divmod(samples, CHUNK_DRAWS)
    sizes = [CHUNK_DRAWS] * full
    if rem:
        sizes.append(rem)
    return sizes
