"""Exception hierarchy.

Two families matter to callers: ``DataError`` (bad input, exit code 3 in the
CLI) and ``DegeneracyError`` (numerically degenerate input, exit code 4).
"""


class AliasScopeError(Exception):
    """Base class for all package errors."""


class DataError(AliasScopeError, ValueError):
    pass


class DegeneracyError(AliasScopeError, ArithmeticError):
    pass


class InvalidArgumentError(DataError):
    pass


class InsufficientPaddingError(DataError):
    pass


class DegenerateSeriesError(DegeneracyError):
    """Series has zero variance."""


class DegenerateSpectrumError(DegeneracyError):
    """No positive contributions to a raw spectral estimate."""


class InvalidAutocorrelationError(DegeneracyError):
    """Lag-1 autocorrelation outside (-1, 1)."""


class NoCandidateSetsError(DegeneracyError):
    pass


class DegenerateIntervalError(DegeneracyError):
    pass


class NotAchievableError(DegeneracyError):
    def __init__(self, message, achievable=()):
        super().__init__(message)
        self.achievable = tuple(achievable)
