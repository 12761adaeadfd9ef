"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class PrecisionError(ArithmeticError):
    """Numeric classification could not be made unambiguous at the working precision."""


class ResourceError(RuntimeError):
    """A dense construction or enumeration would exceed its configured size cap."""


class HypothesisViolation(ValueError):
    """Raised when a finite Novikov-Shubin number is required but the value is infinity-plus."""
