"""Exception hierarchy shared by all modules."""


class DiscSeriesError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 2


class ValidationError(DiscSeriesError, ValueError):
    pass


class NotSelfDual(ValidationError):
    pass


class NonDiscreteParameter(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DeterminantMismatch(ValidationError):
    pass


class InvalidEpsilon(ValidationError):
    pass


class NonPositiveX(ValidationError):
    pass


class MixedMonotonicity(ValidationError):
    pass


class InvalidSegment(ValidationError):
    pass


class UnsupportedSymbol(ValidationError):
    pass


class BlockSetMismatch(ValidationError):
    pass


class SignVectorNotInComponentGroup(ValidationError):
    pass


class AlphabetNotClosedUnderTwist(ValidationError):
    pass


class InconsistentDelta(ValidationError):
    pass


class NotAdmissible(DiscSeriesError):
    exit_code = 3
