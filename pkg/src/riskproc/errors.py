"""Typed error hierarchy shared by every module.

Each class doubles as the machine-readable error code surfaced by the
command line front end (the class name is the code).
"""


class ToolkitError(Exception):
    """Base class for all library errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidParam(ToolkitError):
    """A model parameter violates its admissible range."""


class NonPositiveLevel(ToolkitError):
    """A level series contains a value <= 0 where positivity is required."""


class DegenerateSeries(ToolkitError):
    """Input data carries no usable variation (e.g. zero sample variance)."""


class DomainError(ToolkitError):
    """Argument outside the mathematical domain of a special function."""


class SingularRegression(ToolkitError):
    """Regression design matrix is rank deficient."""


class NonStationaryEstimate(ToolkitError):
    """Fitted AR(1) coefficient outside (0, 1): no mean reversion detected."""


class StationarityViolated(ToolkitError):
    """Volatility-recursion parameters violate the stationarity constraint."""


class OptimizerFailed(ToolkitError):
    """Numerical likelihood maximisation did not converge."""


class QuadratureFailure(ToolkitError):
    """Adaptive quadrature failed to reach the requested accuracy."""


class OutOfSupport(ToolkitError):
    """Point lies outside the support of the requested distribution."""


class TooFewExceedances(ToolkitError):
    """Not enough threshold exceedances for a stable tail fit."""


class InvalidProbability(ToolkitError):
    """Probability level outside the admissible range for the estimator."""


class ShapeTooHeavy(ToolkitError):
    """GPD shape >= 1: the conditional tail expectation is infinite."""


class IntensityTooLarge(ToolkitError):
    """Jump intensity times step exceeds the mixture-density validity bound."""


class ParseError(ToolkitError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message: str, line_no: int | None = None):
        super().__init__(message if line_no is None else f"line {line_no}: {message}")
        self.line_no = line_no


class NonMonotoneDates(ToolkitError):
    """Input timestamps are not strictly increasing."""
