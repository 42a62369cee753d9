"""Exception types raised across the package."""


class AbesselError(Exception):
    """Base class for all package errors."""


# exact algebra
class NonPositivePoint(AbesselError, ValueError):
    pass


class IrrationalValue(AbesselError, ValueError):
    pass


class NonzeroConstantTerm(AbesselError, ValueError):
    pass


class OddPowerSurvives(AbesselError, ArithmeticError):
    pass


# index validation
class InvalidIndex(AbesselError, ValueError):
    pass


class OutOfRange(InvalidIndex):
    pass


class BadParity(InvalidIndex):
    pass


class NegativeOrder(InvalidIndex):
    pass


# normalization and operators
class SignUndefined(AbesselError, ArithmeticError):
    """(-1) raised to a half-integer power."""


class ZeroLSingularity(AbesselError, ZeroDivisionError):
    """The l-ladder operators and E_{l,m} divide by l."""


# inner products
class DivergentMoment(AbesselError, ArithmeticError):
    pass


class NonIntegerExponent(AbesselError, ValueError):
    pass
