"""Exception hierarchy shared by every module."""


class AiryBeamError(Exception):
    """Base class for all package errors."""


class InvalidInputError(AiryBeamError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(InvalidInputError):
    """Evaluation point outside the physical domain (e.g. z <= 0)."""


class InfeasibleApertureError(InvalidInputError):
    """Aperture too small to hold the stationary-phase neighborhood."""


class PreconditionError(InvalidInputError):
    """A bound was requested where its derivation does not apply."""


class DegenerateDesignError(InvalidInputError):
    """A design rule collapsed to x0 = 0; a focusing beam should be used."""


class ConfigError(InvalidInputError):
    """Configuration failed schema or invariant validation."""

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class NumericalError(AiryBeamError, RuntimeError):
    """A numerical procedure could not deliver its contract."""


class QuadratureError(NumericalError):
    """Quadrature missed its tolerance within the subdivision budget."""

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error={error:.3e})")
        self.estimate = estimate
        self.error = error


class ExtractionError(NumericalError):
    """No usable main-lobe peak could be extracted."""


class ConsistencyError(NumericalError):
    """Internal formulas disagree in a way that must never happen."""
