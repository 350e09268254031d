"""Exception types raised across the package."""


class InvolmodError(Exception):
    """Base class for all package errors."""


# exact arithmetic
class NotDivisible(InvolmodError, ArithmeticError):
    pass


class ForbiddenSpecialization(InvolmodError, ValueError):
    pass


class NotInvertible(InvolmodError, ZeroDivisionError):
    pass


class PositiveExponentPresent(InvolmodError, ValueError):
    pass


class NegativeExponentPresent(InvolmodError, ValueError):
    pass


# groups
class InvalidCoxeterSpec(InvolmodError, ValueError):
    pass


class GroupTooLarge(InvolmodError):
    pass


class UnsupportedGroup(InvolmodError, ValueError):
    pass


class TruncatedTable(InvolmodError):
    """A computation needs the whole group but only a length cutoff is known."""


# twisted involutions
class NotTwistedInvolution(InvolmodError, ValueError):
    pass


class NotReducedExpression(InvolmodError, ValueError):
    pass


# invariant violations: these signal a bug, never a user error
class InvariantViolation(InvolmodError):
    pass


class NotPolynomial(InvariantViolation):
    pass


class PiNotUnique(InvariantViolation):
    pass


class DenominatorOutsideAminus1(InvariantViolation):
    pass


class DeterminantNotUnit(InvariantViolation):
    def __init__(self, message: str, factor=None):
        super().__init__(message)
        self.factor = factor
