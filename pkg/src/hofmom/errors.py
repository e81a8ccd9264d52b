"""Exception types shared across the package."""


class HofmomError(Exception):
    """Base class for all package errors."""


class PrecisionExhaustionError(HofmomError):
    """Working precision was insufficient; retry with more bits."""


class RootIsolationError(HofmomError):
    """Root count after isolation does not match the polynomial degree."""


class QuadratureError(HofmomError):
    """Numerical quadrature failed to reach the requested accuracy."""

    def __init__(self, message, achieved_error=None):
        super().__init__(message)
        self.achieved_error = achieved_error
