"""Exception types raised by lapcut."""


class LapcutError(Exception):
    """Base class for all lapcut errors."""


class Disconnected(LapcutError):
    """The graph does not connect all vertices."""


class NonpositiveResistance(LapcutError):
    """An edge has resistance <= 0."""

    def __init__(self, edge, resistance):
        super().__init__(f"edge {edge} has non-positive resistance {resistance!r}")
        self.edge = edge
        self.resistance = resistance


class SupplyImbalance(LapcutError):
    """The supply vector does not sum to zero within tolerance."""

    def __init__(self, total):
        super().__init__(f"supply entries sum to {total!r}, expected 0")
        self.total = total


class TooLargeForExhaustive(LapcutError):
    """Exhaustive spanning-tree search is limited to tiny graphs."""


class NotATreeEdge(LapcutError):
    """The edge id does not belong to the spanning tree."""


class RootCutQuery(LapcutError):
    """findflow was called on the root, whose subtree is the whole graph."""


class GraphIsTree(LapcutError):
    """The graph has no non-tree edges, so there are no cycles to sample."""


class InfeasibleFlow(LapcutError):
    """A flow violates per-vertex conservation beyond tolerance."""


class SizeGuard(LapcutError):
    """The instance exceeds the dense oracle's size limit."""


class SingularSystem(LapcutError):
    """The reduced Laplacian system could not be solved accurately."""


class DimensionMismatch(LapcutError):
    """Boolean matrix/vector dimensions are inconsistent."""


class ParseError(LapcutError):
    """An input file could not be parsed."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno
