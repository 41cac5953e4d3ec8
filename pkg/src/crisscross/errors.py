"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CrissCrossError(Exception):
    """Base class for all library errors."""


class InvalidParams(CrissCrossError, ValueError):
    pass


class TooSmall(InvalidParams):
    pass


class ZeroInverse(CrissCrossError, ZeroDivisionError):
    pass


class NoSolution(CrissCrossError):
    pass


class DimensionMismatch(CrissCrossError, ValueError):
    pass


class LengthMismatch(DimensionMismatch):
    pass


class FormatError(CrissCrossError, ValueError):
    """Malformed array text or pattern JSON."""


class TooManyErasures(CrissCrossError):
    pass


class Undecodable(CrissCrossError):
    pass


class Ambiguous(CrissCrossError):
    pass


class BudgetExceeded(CrissCrossError):
    pass


class NotASubsequence(CrissCrossError, ValueError):
    pass


class NotASupersequence(CrissCrossError, ValueError):
    pass


class OutOfRange(CrissCrossError, ValueError):
    pass


class NotEncodable(CrissCrossError, ValueError):
    pass


class NoConsistentPattern(CrissCrossError):
    pass


class AmbiguousPattern(CrissCrossError):
    pass


class InvalidSize(InvalidParams):
    pass


class NotALocatorSubpattern(CrissCrossError):
    pass


class NotALocatorSuperpattern(CrissCrossError):
    pass


class MarkerNotFound(CrissCrossError):
    pass


class SingularParitySelection(CrissCrossError):
    pass


class EncodingFailure(CrissCrossError):
    pass


class ShapeMismatch(CrissCrossError, ValueError):
    pass


class LocalizationFailure(CrissCrossError):
    pass


class IndexOutOfRange(CrissCrossError, IndexError):
    pass


class ContentLengthMismatch(CrissCrossError, ValueError):
    pass


class TooLarge(CrissCrossError):
    pass


class Infeasible(CrissCrossError, ValueError):
    pass
