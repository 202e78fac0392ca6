"""Exception types shared across the package."""


class Kh2Error(Exception):
    """Base class for all package errors."""


class RingMismatchError(Kh2Error, ValueError):
    pass


class NotAUnitError(Kh2Error, ValueError):
    pass


class ResourceLimitError(Kh2Error, RuntimeError):
    """A configured resource cap (exponent bound, term count, pair queue) was exceeded."""


class DiagramError(Kh2Error, ValueError):
    pass


class ParseError(Kh2Error, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ReducedTheoryUndefined(Kh2Error, ValueError):
    """The Frobenius system has no root, so reduced homology is not defined."""


class ChainComplexError(Kh2Error, ArithmeticError):
    pass


class UnsupportedRingError(Kh2Error, TypeError):
    pass
