"""
Error types shared by the graph, simulation and protocol layers.
"""


class SeqMbqcError(Exception):
    """Base class for every error raised by this package"""


class GraphError(SeqMbqcError, ValueError):
    """Invalid graph, vertex, permutation or graph file"""


class PreconditionError(SeqMbqcError, ValueError):
    """An operation was called outside its precondition"""


class MemoryCapError(SeqMbqcError, MemoryError):
    """State vector would exceed the configured amplitude cap"""


class ZeroProbabilityError(SeqMbqcError, ValueError):
    """A forced measurement outcome has (numerically) zero probability"""


class NullifierBasisError(SeqMbqcError, ValueError):
    """Coefficient matrix does not describe a graph-state nullifier basis"""
