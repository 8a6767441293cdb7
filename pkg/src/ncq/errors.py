"""Exception hierarchy shared by every ncq module."""


class NcqError(Exception):
    """Base class for all ncq errors."""


class DimensionError(NcqError, ValueError):
    pass


class UnsupportedOperation(NcqError):
    pass


class DivisionByZero(NcqError, ZeroDivisionError):
    pass


class SingularTransform(NcqError, ValueError):
    pass


class NotRealizable(NcqError):
    """A coordinate matrix has no standard-component preimage.

    ``residuals`` holds the exact rational amounts by which the
    realizability conditions fail.
    """

    def __init__(self, message, residuals=()):
        super().__init__(message)
        self.residuals = tuple(residuals)


class UnboundVariable(NcqError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotMultilinear(NcqError, ValueError):
    pass


class OrderTooHigh(NcqError, ValueError):
    pass


class EvaluationError(NcqError, ArithmeticError):
    pass


class Truncated(NcqError):
    """Repeated differentiation did not terminate within ``max_order``."""


class ParseError(NcqError, SyntaxError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SemanticError(NcqError):
    pass
