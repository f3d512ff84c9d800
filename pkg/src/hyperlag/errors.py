"""Exception hierarchy shared by every module."""


class HypergraphError(ValueError):
    """Base class for invalid hypergraph input or parameters."""


class EdgeOutOfRange(HypergraphError):
    pass


class EdgeWrongArity(HypergraphError):
    pass


class InvalidParameter(HypergraphError):
    pass


class UnsupportedUniformity(HypergraphError):
    pass


class DimensionMismatch(HypergraphError):
    pass


class GridTooLarge(HypergraphError):
    pass


class CodegreeTooSmall(HypergraphError):
    pass


class PairNotPresent(CodegreeTooSmall):
    """The pair has codegree 0, so there is nothing to cross."""


class NotTwoCovered(HypergraphError):
    pass


class SearchBudgetExceeded(RuntimeError):
    """A backtracking search hit its node budget before reaching an answer."""

    def __init__(self, nodes: int):
        super().__init__(f"search aborted after {nodes} nodes")
        self.nodes = nodes


class UniformityMismatch(HypergraphError):
    pass
