"""Exception types shared across the package."""


class C3MAError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(C3MAError):
    """Input matrix or vector violates a documented precondition."""


class ShapeError(C3MAError):
    """Matrix has the wrong orientation or incompatible dimensions."""


class InvalidKappa(C3MAError):
    """Condition number bound must be a finite real >= 1."""


class InvalidIndex(C3MAError):
    """Truncation index pair (alpha, beta) is out of range."""


class InfeasibleZeroMatrix(C3MAError):
    """The zero matrix admits no positive definite approximation under a finite bound."""


class NotApplicable(C3MAError):
    """Operation is only defined on the other branch of the solver."""
