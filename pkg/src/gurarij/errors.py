"""Exception hierarchy shared by every module."""


class GurarijError(Exception):
    """Base class; ``code`` is the CLI exit status for the failure."""

    code = 1

    def __init__(self, message="", **data):
        super().__init__(message or self.__class__.__name__)
        self.data = data


class ValidationError(GurarijError):
    code = 2


class ParseError(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DimensionTooLarge(ValidationError):
    pass


class DegenerateBall(ValidationError):
    pass


class UnboundedBall(ValidationError):
    pass


class InfeasibleInput(GurarijError):
    pass


class Unbounded(GurarijError):
    pass


class ZeroVector(ValidationError):
    pass


class NotIsometric(GurarijError):
    pass


class ConditionViolated(GurarijError):
    pass


class NotExtendingIdentity(ValidationError):
    pass


class BaseMismatch(ValidationError):
    pass


class NotKatetov(GurarijError):
    pass


class WrongArity(ValidationError):
    pass


class EmptyRegion(ValidationError):
    pass


class NotABasis(ValidationError):
    pass


class AvoidanceViolation(GurarijError):
    pass


class NoAnchorsFound(GurarijError):
    pass


class GridTooLarge(ValidationError):
    pass


class SmallToleranceCapped(UserWarning):
    pass
