"""Exception types raised by the engine."""


class MeasureEngineError(Exception):
    """Base class for engine errors."""


class PreconditionError(MeasureEngineError, ValueError):
    """An operation was called with inputs violating its contract."""


class EmptySystemError(PreconditionError):
    def __init__(self):
        super().__init__("empty system")


class NotASemiringError(MeasureEngineError):
    """Raised when a semiring-only operation meets a system that is not one.

    ``pair`` holds the (whole, part) masks for which no finite expansion exists,
    when that is the cause.
    """

    def __init__(self, message="not a semiring", pair=None):
        super().__init__(message)
        self.pair = pair


class MissingValueError(PreconditionError):
    def __init__(self, member):
        super().__init__(f"measure has no value for member {member}")
        self.member = member


class MeasureNotAdditiveError(MeasureEngineError):
    """Two expansions of one set produced different measure sums."""


class NoUnitError(PreconditionError):
    def __init__(self):
        super().__init__("semiring has no unit (the union of its members is not a member)")


class NotMeasurableError(PreconditionError):
    pass
