"""Exception hierarchy shared by all modules."""


class UncoverError(Exception):
    """Base class for every error raised by the package."""


class GraphError(UncoverError, ValueError):
    """Malformed graph: loops, duplicate edges, bad vertex labels, n = 0."""


class NotRegular(UncoverError, ValueError):
    pass


class BadScale(UncoverError, ValueError):
    pass


class InvalidSpec(UncoverError, ValueError):
    pass


class ConfigRejectionExceeded(UncoverError, RuntimeError):
    pass


class RejectionBudgetExceeded(UncoverError, RuntimeError):
    pass


class DimensionMismatch(UncoverError, ValueError):
    pass


class OutOfDomain(UncoverError, ValueError):
    pass


class TildeAtOne(UncoverError, ValueError):
    """A (1 - t)-rescaled martingale was evaluated at t = 1."""


class NotPSD(UncoverError, ValueError):
    pass


class SpecInvalid(UncoverError, ValueError):
    pass


class GridMismatch(UncoverError, ValueError):
    pass


class TooLarge(UncoverError, ValueError):
    pass
