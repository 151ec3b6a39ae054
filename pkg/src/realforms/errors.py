"""Exception hierarchy shared by every module of the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by realforms."""


class InvalidTower(AlgebraError, ValueError):
    pass


class FieldMismatch(AlgebraError, TypeError):
    pass


class DivisionByZero(AlgebraError, ZeroDivisionError):
    pass


class NonInvertibleLaurentElement(AlgebraError, ArithmeticError):
    """Only monomials c*t^v are invertible among finite Laurent polynomials."""


class ZeroElement(AlgebraError, ValueError):
    pass


class ZeroScalar(ZeroElement):
    pass


class OrderingFieldMismatch(AlgebraError, ValueError):
    pass


class UndecidableRepresentation(AlgebraError):
    pass


class NotLaurentField(AlgebraError, TypeError):
    pass


class NotAnExtension(AlgebraError, ValueError):
    pass


class NonInvertible(AlgebraError, ArithmeticError):
    """Quaternion with zero reduced norm."""


class NonInvertibleU(NonInvertible):
    pass


class InvalidInvolution(AlgebraError, ValueError):
    pass


class NotSplitByL(AlgebraError, ValueError):
    pass


class PreconditionFailed(AlgebraError, ValueError):
    pass


class DimensionMismatch(AlgebraError, ValueError):
    pass


class NonDivisible(AlgebraError, ValueError):
    pass


class ParseError(AlgebraError, ValueError):
    pass


class UnknownScenario(AlgebraError, KeyError):
    pass


class InternalUnknownVerdict(AlgebraError):
    """A scenario needed a decisive verdict and got Unknown."""
