"""Exception types shared across the package."""


class GcflowError(Exception):
    """Base class for all package errors."""


class GridMismatch(GcflowError):
    """Two fields live on different grids, or a field has the wrong length."""


class ConvexityViolation(GcflowError):
    """The sampled support function is not strictly convex (A = D2s + s*Id not PD)."""


class NotNormalized(GcflowError):
    """An operation requiring V(K) = V(B) was called on an unnormalized body."""


class LineSearchFailure(GcflowError):
    """Newton line search could not keep the iterate interior; field is suspect."""


class OptimizationFailure(GcflowError):
    """An inradius/circumradius solve stalled; must not happen on convex fields."""


class StepFailure(GcflowError):
    """Flow step failed even after exhausting time-step halvings."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
