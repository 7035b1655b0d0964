"""Subtree-update / cut-flow data structure with two backends.

State is one real value per vertex (all zero initially).  ``addvalue(v, x)``
adds x to every value in the subtree rooted at v; ``findflow(v)`` returns
S(C) - f(C) for the fundamental cut C = subtree(v), where S(C) is the cut's
supply and f(C) the value-induced flow out of it,

    f(C) = sum over edges (u,w) crossing C, u inside:  (value(u) - value(w)) / r(u,w).

The naive backend answers findflow by scanning the cut's crossing edges.
The table backend keeps all n-1 cut flows current: a precomputed influence
table H holds, per pair of cuts (C, C'), the change of f(C') caused by a
unit value increase on C, so one addvalue touches one row of H.  Both
backends agree to float accuracy on any operation sequence.

Values are stored indexed by preorder position, which turns every subtree
update into one contiguous slice addition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import RootCutQuery
from .graph import WeightedGraph
from .rng import SplitMix64
from .tree import CutQuantities, RootedTree, cut_quantities

BACKENDS = ("naive", "table")


@dataclass(frozen=True)
class InfluenceTable:
    """Response of every cut's outflow to unit subtree updates.

    H[k, j] is the increase of the flow out of cut j when all values in cut
    k rise by 1; equivalently the Laplacian pairing of the two cut
    indicators.  The diagonal entry H[k, k] is the crossing conductance
    1/R(cut k).
    """

    H: np.ndarray


def _position_arrays(graph: WeightedGraph, tree: RootedTree):
    e_tpos = tree.dfs_in[graph.tail]
    e_hpos = tree.dfs_in[graph.head]
    return np.ascontiguousarray(e_tpos), np.ascontiguousarray(e_hpos)


def build_h_table(graph: WeightedGraph, tree: RootedTree) -> InfluenceTable:
    """Fill the influence table by the leaves-up recurrence, one row per cut."""
    n = graph.n
    e_tpos, e_hpos = _position_arrays(graph, tree)
    parent_pos = np.ascontiguousarray(tree.dfs_in[tree.parent[tree.order]])
    sub_hi = np.ascontiguousarray(tree.dfs_out[tree.order[1:]])
    H = np.zeros((n - 1, n - 1), dtype=np.float64)
    _kernels.active.build_h_table(
        n, e_tpos, e_hpos, np.ascontiguousarray(graph.inv_resistance),
        parent_pos, sub_hi, H)
    H.setflags(write=False)
    return InfluenceTable(H)


class TreeFlow:
    """Mutable value store over (graph, tree, b) with cut-flow queries.

    Single-writer: addvalue mutates, findflow reads.  clone() yields an
    independent copy sharing only the immutable instance data.
    """

    def __init__(self, graph: WeightedGraph, tree: RootedTree, b,
                 backend: str = "table",
                 quantities: Optional[CutQuantities] = None,
                 table: Optional[InfluenceTable] = None):
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}; pick one of {BACKENDS}")
        self.graph = graph
        self.tree = tree
        self.b = np.asarray(b, dtype=np.float64)
        self.backend = backend
        self.quantities = quantities if quantities is not None \
            else cut_quantities(graph, tree, self.b)
        self._vals = np.zeros(graph.n, dtype=np.float64)

        cr = self.quantities.crossings
        eids = cr.edge
        inside = np.where(cr.tail_inside == 1, graph.tail[eids], graph.head[eids])
        outside = np.where(cr.tail_inside == 1, graph.head[eids], graph.tail[eids])
        self._cr_indptr = np.ascontiguousarray(cr.indptr)
        self._cr_apos = np.ascontiguousarray(tree.dfs_in[inside])
        self._cr_bpos = np.ascontiguousarray(tree.dfs_in[outside])
        self._cr_w = np.ascontiguousarray(graph.inv_resistance[eids])

        if backend == "table":
            self.table = table if table is not None else build_h_table(graph, tree)
            self._cut_flow = np.zeros(graph.n - 1, dtype=np.float64)
        else:
            self.table = None
            self._cut_flow = None

    def addvalue(self, v: int, x: float) -> None:
        """Add x to the value of every vertex in the subtree rooted at v.

        At the root this shifts all values uniformly and changes no flow.
        """
        tree = self.tree
        self._vals[tree.dfs_in[v]:tree.dfs_out[v]] += x
        if self.backend == "table" and v != tree.root:
            self._cut_flow += x * self.table.H[tree.cut_index(v)]

    def findflow(self, v: int) -> float:
        """S(C) - f(C) for the cut below v; rejected at the root."""
        tree = self.tree
        if v == tree.root:
            raise RootCutQuery("findflow at the root: the subtree is all of V")
        k = tree.cut_index(v)
        if self.backend == "table":
            return float(self.quantities.S[k] - self._cut_flow[k])
        return float(self.quantities.S[k] - self._flow_of_cut(k))

    def _flow_of_cut(self, k: int) -> float:
        lo, hi = self._cr_indptr[k], self._cr_indptr[k + 1]
        return float(np.dot(self._vals[self._cr_apos[lo:hi]]
                            - self._vals[self._cr_bpos[lo:hi]],
                            self._cr_w[lo:hi]))

    def cut_flows(self) -> np.ndarray:
        """Current f(C) for every cut (recomputed under the naive backend)."""
        if self.backend == "table":
            return self._cut_flow.copy()
        out = np.empty(self.graph.n - 1, dtype=np.float64)
        _kernels.active.naive_cut_flows(self._vals, self._cr_indptr,
                                        self._cr_apos, self._cr_bpos,
                                        self._cr_w, out)
        return out

    def value(self, v: int) -> float:
        return float(self._vals[self.tree.dfs_in[v]])

    def values(self) -> np.ndarray:
        """Per-vertex values (indexed by vertex id)."""
        return self._vals[self.tree.dfs_in].copy()

    def clone(self) -> "TreeFlow":
        other = TreeFlow(self.graph, self.tree, self.b, self.backend,
                         self.quantities, self.table)
        other._vals[:] = self._vals
        if self.backend == "table":
            other._cut_flow[:] = self._cut_flow
        return other


class ApproxTreeFlow:
    """Wrapper whose findflow answers carry seeded multiplicative noise.

    Each answer is the exact one times a factor drawn uniformly from
    [1/alpha, alpha], so exact zeros stay zero and every answer y satisfies
    true/alpha <= y <= true*alpha (interval flipped for negative answers).
    """

    def __init__(self, inner: TreeFlow, alpha: float, seed: int = 0):
        if alpha < 1.0:
            raise ValueError("alpha must be >= 1")
        self.inner = inner
        self.alpha = float(alpha)
        self._rng = SplitMix64(seed)

    def addvalue(self, v: int, x: float) -> None:
        self.inner.addvalue(v, x)

    def findflow(self, v: int) -> float:
        exact = self.inner.findflow(v)
        lo = 1.0 / self.alpha
        factor = lo + self._rng.next_float() * (self.alpha - lo)
        return exact * factor

    def values(self) -> np.ndarray:
        return self.inner.values()
