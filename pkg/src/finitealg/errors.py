"""Exception types.  All domain errors derive from ``FiniteAlgError``."""


class FiniteAlgError(Exception):
    pass


class DimensionMismatch(FiniteAlgError, ValueError):
    pass


class ParseError(FiniteAlgError, ValueError):
    pass


class NotCommutingError(FiniteAlgError):
    pass


class InfiniteColengthError(FiniteAlgError):
    """Colength did not stabilize below the truncation cap."""


class NotLocalError(FiniteAlgError):
    """The operation needs an ideal supported only at the origin."""


class NotFoundError(FiniteAlgError):
    """A search (cyclic vector, coordinate direction, ...) came up empty."""
