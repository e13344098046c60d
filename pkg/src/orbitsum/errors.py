"""Exception types shared across the package."""


class OrbitsumError(Exception):
    """Base class for all package errors."""


class DomainError(OrbitsumError, ValueError):
    """An argument violates a documented invariant (bad parameter, shape, range)."""


class DimensionError(DomainError):
    """Matrix or vector dimensions are inconsistent."""


class NumericsError(OrbitsumError, RuntimeError):
    """A numerical procedure failed to converge to its requested accuracy."""
