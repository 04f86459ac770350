"""Exception types shared across the package."""


class GraphspreadError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(GraphspreadError, ValueError):
    pass


class InvalidSizeError(InvalidArgumentError):
    pass


class GraphError(GraphspreadError, ValueError):
    """A graph violates a structural precondition."""


class DegenerateDegreeError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class InvalidMatrixError(InvalidArgumentError):
    pass


class SolverError(GraphspreadError, RuntimeError):
    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class DomainError(InvalidArgumentError):
    pass


class ConvergenceError(GraphspreadError, RuntimeError):
    """Refinement hit its iteration cap; ``partial`` holds what was computed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
