"""Exception hierarchy shared by all modules."""


class FqPointsError(ValueError):
    """Base class; every error raised on bad input derives from this."""


class NotPrime(FqPointsError):
    pass


class TooLarge(FqPointsError):
    pass


class FieldMismatch(FqPointsError):
    pass


class DivisionByZero(FqPointsError, ZeroDivisionError):
    pass


class OutOfRange(FqPointsError):
    pass


class ArityMismatch(FqPointsError):
    pass


class MixedDegrees(FqPointsError):
    pass


class ZeroPolynomial(FqPointsError):
    pass


class DegreeExceedsQ(FqPointsError):
    pass


class DegreeExceedsQPlus1(FqPointsError):
    pass


class BadBudget(FqPointsError):
    pass


class DimensionTooLarge(FqPointsError):
    pass


class HypothesisViolated(FqPointsError):
    pass


class LengthMismatch(FqPointsError):
    pass


class Degenerate(FqPointsError):
    pass


class ParseError(FqPointsError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
