"""Exception types shared across the package."""

__all__ = [
    "InvalidModelError",
    "OutOfSectorError",
    "ResourceError",
    "ConvergenceError",
    "CorruptStateError",
]


class InvalidModelError(ValueError):
    """Model parameters violate a structural requirement (e.g. q does not divide N)."""


class OutOfSectorError(ValueError):
    """A configuration does not belong to the requested particle-number sector."""


class ResourceError(RuntimeError):
    """A requested computation would exceed the configured memory budget."""


class ConvergenceError(RuntimeError):
    """The iterative eigensolver failed to reach the requested residual tolerance."""

    def __init__(self, message, energies=None, residuals=None):
        super().__init__(message)
        self.energies = energies
        self.residuals = residuals


class CorruptStateError(ValueError):
    """A cached state file failed validation (magic, checksum, or norm)."""
