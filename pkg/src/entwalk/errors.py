"""Exception types raised by the walk simulator."""


class WalkError(ValueError):
    """Base class for all invalid-input errors."""


class NonUnitary(WalkError):
    pass


class NotNormalized(WalkError):
    pass


class OutOfRange(WalkError):
    pass


class Overflow(WalkError):
    """Amplitude would be shifted past the edge of the position array.

    Raised when ``n_max`` is too small for the number of steps requested.
    """


class InvariantViolation(RuntimeError):
    """A computed result failed one of its post-conditions."""
