class TreecutError(Exception):
    """Base class for errors raised by this package."""


class InvalidCutError(TreecutError, ValueError):
    pass


class GraphFormatError(TreecutError, ValueError):
    pass


class DisconnectedGraphError(TreecutError, ValueError):
    pass


class TooLargeError(TreecutError, ValueError):
    """Input exceeds the size an exhaustive or dense routine accepts."""


class SkeletonError(TreecutError, RuntimeError):
    pass


class InternalError(TreecutError, AssertionError):
    """An invariant of the algorithm was violated."""
