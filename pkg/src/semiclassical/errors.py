"""Exception hierarchy shared by all modules."""


class SemiclassicalError(Exception):
    """Base class for errors raised by this package."""


class MathError(SemiclassicalError):
    """A computation is undefined for the given input."""


class BoundExceeded(SemiclassicalError):
    """An internal size or iteration bound was hit."""


class DegreeBoundExceeded(BoundExceeded):
    pass


class NotStabilized(BoundExceeded):
    pass


class ZeroDivisorInverse(MathError):
    pass


class NotCommutativeLimit(MathError):
    def __init__(self, i, j, names=None):
        self.i, self.j = i, j
        if names is not None:
            msg = f"commutator [{names[i]},{names[j]}] has nonzero value part"
        else:
            msg = f"commutator of generators {i} and {j} has nonzero value part"
        super().__init__(msg)


class ValidationError(SemiclassicalError, ValueError):
    """Malformed input: a presentation, structure or configuration document."""
