"""Exception types shared across the package."""


class Curv4Error(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(Curv4Error, ValueError):
    """Input violates a structural contract (symmetry, orthonormality, schema)."""


class DegenerateInputError(Curv4Error, ValueError):
    """Input is rank-deficient where linear independence is required."""


class ConsistencyError(Curv4Error, RuntimeError):
    """An internal identity failed: the computation itself is broken, not the input."""
