"""Exception types shared across the package."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to meet its tolerance within the iteration cap."""


class RegimeViolationError(ValueError):
    """Parameters fall outside the asymptotic regime a closed form assumes."""


class InsufficientRecordError(ValueError):
    """Record too short for the requested interpolation truncation margins."""
