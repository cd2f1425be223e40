"""Exception hierarchy.

Everything derives from :class:`FPRError` (a ``ValueError``) so callers can
catch one type; the CLI maps :class:`Unestimable` to its own exit code.
"""


class FPRError(ValueError):
    pass


class NonSquareGrid(FPRError):
    pass


class OutOfRangeValue(FPRError):
    pass


class DiagonalConflict(FPRError):
    pass


class TooFewAlternatives(FPRError):
    pass


class EmptyRelation(FPRError):
    pass


class IndexOutOfRange(FPRError, IndexError):
    pass


class DiagonalPair(FPRError):
    pass


class Unestimable(FPRError):
    pass


class DimensionMismatch(FPRError):
    pass


class ShapeMismatch(DimensionMismatch):
    pass


class TooFewExperts(FPRError):
    pass


class EmptyList(FPRError):
    pass


class InvalidParams(FPRError):
    pass


class InfeasibleMask(FPRError):
    pass
