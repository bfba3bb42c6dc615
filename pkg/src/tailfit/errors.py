"""Exception hierarchy shared by every tailfit module."""


class TailfitError(Exception):
    """Base class for all errors raised by tailfit."""


class DomainError(TailfitError, ValueError):
    """An argument lies outside the domain of the operation."""


class FitError(TailfitError):
    """A model could not be fitted to the supplied data."""

    status = "failed"


class InsufficientDataError(FitError, ValueError):
    status = "insufficient-data"


class DegenerateDataError(FitError, ValueError):
    status = "degenerate"


class ConvergenceError(FitError, RuntimeError):
    status = "non-converged"


class ProtocolError(TailfitError, ValueError):
    """Two objects were combined in a way the protocol forbids."""


class DegenerateComparisonError(TailfitError, ValueError):
    """Constant nonzero log-likelihood ratios; the Vuong statistic is undefined."""


class ParseError(TailfitError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
