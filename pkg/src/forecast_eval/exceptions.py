"""Exception hierarchy.

The CLI maps each top-level class to its own exit code, so new errors should
subclass one of ``ConfigError``, ``IngestionError`` or ``ComputationError``.
"""


class ForecastEvalError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ForecastEvalError, ValueError):
    """Invalid evaluation configuration or command-line arguments."""


class IngestionError(ForecastEvalError, ValueError):
    """A CSV input could not be turned into a series or panel.

    Parameters
    ----------
    message : str
        What went wrong.
    path : str, optional
        File being parsed.
    line : int, optional
        1-based line number in the file (the header is line 1).
    """

    def __init__(self, message, path=None, line=None):
        self.message = message
        self.path = path
        self.line = line
        loc = ""
        if path is not None:
            loc = str(path)
        if line is not None:
            loc = f"{loc}:{line}" if loc else f"line {line}"
        super().__init__(f"{loc}: {message}" if loc else message)


class FormatError(IngestionError):
    """Unparseable period, horizon or value."""


class NonContiguousSeriesError(IngestionError):
    pass


class DuplicateRowError(IngestionError):
    pass


class AmbiguousSurveyError(IngestionError):
    """Two survey records map onto the same (origin, horizon) key."""


class ComputationError(ForecastEvalError, ValueError):
    """A numerical routine cannot produce a meaningful result."""

    reason = "computation error"


class InsufficientObservationsError(ComputationError):
    reason = "insufficient observations"


class EmptySubsampleError(ComputationError):
    reason = "empty sub-sample"


class DegenerateSampleError(ComputationError):
    """Zero-variance sample.

    ``partial`` holds whatever statistics are still well defined (location
    and spread fields), so callers can report them alongside the failure.
    """

    reason = "degenerate sample"

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DegenerateWindowError(ComputationError):
    reason = "degenerate window"


class CollinearWindowError(ComputationError):
    reason = "collinear window"


class DegenerateDifferentialError(ComputationError):
    reason = "degenerate differential"


class SingularDesignError(ComputationError):
    reason = "singular design"


class LossOverflowError(ComputationError):
    reason = "loss overflow"
