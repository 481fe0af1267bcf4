"""Exception hierarchy shared by all modules."""


class JanossyError(Exception):
    """Base class for errors raised by this package."""


class InvalidArgumentError(JanossyError, ValueError):
    pass


class DomainError(InvalidArgumentError):
    """Argument outside the region where a quantity is tabulated."""


class NumericError(JanossyError, ArithmeticError):
    pass


class ConvergenceError(NumericError):
    pass


class StiffnessError(NumericError):
    """Adaptive step size underflowed; ``s`` is where the integration stopped."""

    def __init__(self, message, s):
        super().__init__(message)
        self.s = s


class AccuracyError(NumericError):
    pass


class DataIntegrityError(JanossyError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ParseError(DataIntegrityError):
    pass


class InsufficientStatisticsError(JanossyError):
    pass


class FitError(NumericError):
    pass


class QualityWarning(RuntimeWarning):
    """Result was computed but is at the edge of double precision."""
