"""orbitsum: spectral statistics of sums of random Hermitian matrices.

Closed-form eigenvalue and diagonal densities for sums over fixed-spectrum
unitary orbits and for GUE/Wishart sums, an exact symbolic realization of the
derivative principle, exponential-trace statistics around the Golden-Thompson
inequality, qubit orbit-mixture divergences, and a seeded Monte Carlo harness
validating every formula.
"""

__version__ = "0.1.0"

from .errors import DimensionError, DomainError, NumericsError, OrbitsumError
from .linalg import (
    HermitianMatrix,
    RandomStream,
    Spectrum,
    UnitaryMatrix,
    conjugate_orbit,
    eigh,
    matrix_exp,
    sample_haar_unitary,
    vandermonde,
)

__all__ = [
    "__version__",
    "DimensionError",
    "DomainError",
    "NumericsError",
    "OrbitsumError",
    "HermitianMatrix",
    "RandomStream",
    "Spectrum",
    "UnitaryMatrix",
    "conjugate_orbit",
    "eigh",
    "matrix_exp",
    "sample_haar_unitary",
    "vandermonde",
]
