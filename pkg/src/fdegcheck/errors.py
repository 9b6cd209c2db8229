"""Error taxonomy shared across the package."""


class CapacityError(ValueError):
    """An enumeration bound (rank, group order) was exceeded."""


class InvalidInputError(ValueError):
    """Input data violates a documented precondition."""


class UnsupportedInputError(ValueError):
    """Input is well-formed but outside the implemented model."""


class InternalConsistencyError(RuntimeError):
    """A derived object failed validation that catalog data must satisfy."""
