"""Exception hierarchy shared by every hhbounds module."""


class HHBoundsError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(HHBoundsError, ValueError):
    """A parameter lies outside the range an operation accepts."""


class DomainError(HHBoundsError, ValueError):
    """A function was evaluated outside its domain or returned NaN/inf."""


class LookupFailure(HHBoundsError, KeyError):
    """Unknown catalog name."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class OracleError(HHBoundsError, RuntimeError):
    """The integration oracle ran out of budget before meeting its tolerance.

    The best estimate obtained so far is kept in ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class UnsupportedError(HHBoundsError, ValueError):
    """Requested combination is outside what the bound formulas cover (e.g. q <= 1 for Hoelder)."""


class HypothesisError(HHBoundsError):
    """Convexity hypothesis failed where it is required."""


class ConsistencyError(HHBoundsError, AssertionError):
    """Two routes to the same quantity disagree beyond tolerance."""
