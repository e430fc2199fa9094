"""Exception hierarchy for graph sampling analysis."""


class GraphSamplingError(Exception):
    """Base class for all errors raised by this package."""


class GraphValidationError(GraphSamplingError, ValueError):
    """A graph violates the simple weighted undirected graph invariants."""


class SelfLoopError(GraphValidationError):
    pass


class DuplicateEdgeError(GraphValidationError):
    pass


class ParseError(GraphValidationError):
    """Malformed graph or signal file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IsolatedNodeError(GraphSamplingError, ValueError):
    """A node has zero degree, so D^{-1/2} is undefined."""

    def __init__(self, nodes):
        self.nodes = list(nodes)
        shown = ", ".join(map(str, self.nodes[:10]))
        more = "" if len(self.nodes) <= 10 else ", ..."
        super().__init__(f"isolated nodes: {shown}{more}")


class OverlapError(GraphSamplingError, ValueError):
    pass


class DimensionMismatchError(GraphSamplingError, ValueError):
    pass


class DegenerateBandIndexError(GraphSamplingError, ValueError):
    """Band index falls strictly inside a group of repeated eigenvalues."""


class DegenerateTargetError(GraphSamplingError, ValueError):
    """Target size m is not the last index of its eigenvalue group."""


class FrequencyOutOfRangeError(GraphSamplingError, ValueError):
    pass


class PreconditionError(GraphSamplingError, ValueError):
    pass


class NumericalError(GraphSamplingError, ArithmeticError):
    pass


class ConvergenceError(NumericalError):
    pass


class IllConditionedError(NumericalError):
    pass


class DisconnectedGenerationError(GraphSamplingError, RuntimeError):
    pass
