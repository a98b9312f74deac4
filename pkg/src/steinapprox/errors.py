"""Exception types raised across the package."""


class SteinError(Exception):
    """Base class for all package errors."""


class RangeError(SteinError, ValueError):
    """An argument lies outside the supported range."""


class DomainError(SteinError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class HypothesisError(SteinError, ValueError):
    """A hypothesis of a bound or construction is not satisfied.

    ``hypothesis`` names the failed condition so callers can report it.
    """

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        self.detail = detail
        msg = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(msg)


class DimensionError(SteinError, ValueError):
    """Requested method is unavailable for the given dimension."""


class AccuracyError(SteinError, RuntimeError):
    """A numerical routine could not certify its tolerance."""

    def __init__(self, message: str, estimate: float):
        self.estimate = estimate
        super().__init__(f"{message} (achieved error estimate {estimate:.3g})")


class InsufficientSignalError(SteinError, RuntimeError):
    """Too few statistically significant points to fit a rate."""

    def __init__(self, message: str, points):
        self.points = points
        super().__init__(message)


class ConfigError(SteinError, ValueError):
    """Invalid scenario configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")
