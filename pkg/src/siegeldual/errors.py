"""Exception hierarchy shared by every module of the package."""


class SiegelError(Exception):
    """Base class for all errors raised by siegeldual."""


# exact arithmetic

class MixedFields(SiegelError, TypeError):
    pass


class DivisionByZero(SiegelError, ZeroDivisionError):
    pass


class ZeroDenominatorIdentically(SiegelError, ZeroDivisionError):
    pass


class ParseError(SiegelError, ValueError):
    pass


# partitions

class LengthTooSmall(SiegelError, ValueError):
    pass


class NilpotencyTooSmall(SiegelError, ValueError):
    pass


# linear algebra

class DimensionMismatch(SiegelError, ValueError):
    pass


class Singular(SiegelError, ArithmeticError):
    pass


class Inconsistent(SiegelError, ArithmeticError):
    pass


class NotInSpan(SiegelError, ArithmeticError):
    pass


class BadBlockIndex(SiegelError, IndexError):
    pass


class SizeMismatch(SiegelError, ValueError):
    pass


class NotUnitriangular(SiegelError, ValueError):
    pass


# siegel objects

class ShapeMismatch(SiegelError, ValueError):
    pass


class SystemInconsistent(SiegelError, ArithmeticError):
    pass


# lattices

class SpanFailure(SiegelError, ArithmeticError):
    """The vectors N^i l_j do not generate the ambient space."""


class InternalRankMismatch(SiegelError, ArithmeticError):
    """Segment sizes found by arrangement disagree with the Jordan invariants."""
