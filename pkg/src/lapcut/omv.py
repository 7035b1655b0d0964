"""Online Boolean u^T M v queries answered through the cut-flow structure.

A Boolean n x n matrix M is encoded as a star-rooted instance: a hub vertex,
one vertex per column, one per row, an edge (row i, column j) wherever
M[i, j] = 1, and an edge from every vertex to the hub so the graph is
connected.  All resistances are 1 and the spanning tree is the star of hub
edges, so every non-hub subtree is a single vertex and addvalue/findflow act
on single columns and rows.

A query (u, v) is answered with O(n) operations: lift every value by a large
constant via the hub (a pure gauge shift), lower the rows with u_i = 1 back
to the old level, and probe findflow at each column with v_j = 1.  A probed
column then sees flow K per edge to a lowered row, so its cut flow is
exactly K times the number of (u_i = 1, M_ij = 1) neighbours: zero iff the
column contributes nothing to u^T M v.  With the big value above
||r||_inf * ||b||_inf * alpha^2, zero and nonzero stay distinguishable even
when findflow answers are only alpha-approximate.  All changes are undone
before returning, restoring every value exactly.

The optional "monotone" mode never decreases a value: it raises the rows
with u_i = 1 above the resting level, decides by thresholding against the
known level, and finishes each query by raising everything else to the new
level.  The hub can never rise relative to the leaves, so this mode is
limited to exact (alpha = 1) queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionMismatch
from .graph import WeightedGraph
from .rng import SplitMix64
from .tree import RootedTree, cut_quantities, tree_from_edges
from .treeflow import ApproxTreeFlow, TreeFlow

BIG_VALUE_MARGIN = 1e-6

Store = Union[TreeFlow, ApproxTreeFlow]


@dataclass(frozen=True)
class ReductionInstance:
    """Star-graph encoding of a Boolean matrix for online queries."""

    M: np.ndarray
    alpha: float
    graph: WeightedGraph
    tree: RootedTree
    b: np.ndarray
    big_value: float
    hub: int
    col_nodes: np.ndarray
    row_nodes: np.ndarray

    @property
    def n(self) -> int:
        return self.M.shape[0]


@dataclass
class QueryTranscript:
    """The addvalue/findflow schedule issued for one (u, v) pair."""

    ops: List[Tuple[str, int, Optional[float]]] = field(default_factory=list)
    probes: List[Tuple[int, float]] = field(default_factory=list)
    answer: int = 0


def build_instance(M, alpha: float = 1.0, b=None) -> ReductionInstance:
    """Encode M; edges are listed matrix-first, then the star edges."""
    M = np.asarray(M).astype(bool)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got shape {M.shape}")
    if alpha < 1.0:
        raise ValueError("alpha must be >= 1")
    n = M.shape[0]
    hub = 0
    col_nodes = np.arange(1, n + 1, dtype=np.int64)
    row_nodes = np.arange(n + 1, 2 * n + 1, dtype=np.int64)
    edges = [(int(row_nodes[i]), int(col_nodes[j]), 1.0)
             for i in range(n) for j in range(n) if M[i, j]]
    star_start = len(edges)
    edges += [(int(c), hub, 1.0) for c in col_nodes]
    edges += [(int(d), hub, 1.0) for d in row_nodes]
    graph = WeightedGraph(2 * n + 1, edges)
    tree = tree_from_edges(graph, list(range(star_start, star_start + 2 * n)), root=hub)

    if b is None:
        b = np.zeros(2 * n + 1, dtype=np.float64)
    else:
        b = np.asarray(b, dtype=np.float64)
        if b.shape != (2 * n + 1,):
            raise DimensionMismatch(
                f"supply vector has shape {b.shape}, expected ({2 * n + 1},)")
    rmax = float(graph.resistance.max()) if graph.m else 1.0
    bmax = float(np.abs(b).max()) if b.size else 0.0
    base = max(1.0, rmax * bmax * alpha * alpha) * (1.0 + BIG_VALUE_MARGIN)
    # Round up to a power of two: all lifts, probes and undos then hit exact
    # float sums (integer multiples of big_value), so the sign-based
    # decision rule never sees leftover rounding noise from earlier queries.
    big_value = float(2.0 ** np.ceil(np.log2(base)))
    return ReductionInstance(M, float(alpha), graph, tree, b, big_value,
                             hub, col_nodes, row_nodes)


def new_store(instance: ReductionInstance, backend: str = "table",
              seed: int = 0) -> Store:
    """A cut-flow store for the instance; alpha > 1 wraps it in noise."""
    tf = TreeFlow(instance.graph, instance.tree, instance.b, backend,
                  cut_quantities(instance.graph, instance.tree, instance.b))
    if instance.alpha > 1.0:
        return ApproxTreeFlow(tf, instance.alpha, seed)
    return tf


def _decide_undo(bj: float, y: float, alpha: float) -> bool:
    # Positive cut flow iff the answer fell below the entire zero-flow band.
    if bj >= 0.0:
        return y < 0.0
    return y < bj * alpha


def answer_query(instance: ReductionInstance, u, v, store: Optional[Store] = None,
                 mode: str = "undo", baseline: float = 0.0
                 ) -> Tuple[int, QueryTranscript]:
    """Answer u^T M v with O(n) store operations.

    mode "undo" (default): lift / lower / probe / restore, any alpha.
    mode "monotone": values only ever increase; requires alpha = 1 and a
    `baseline` equal to the resting leaf level left by the previous query
    (big_value times the number of completed queries).
    """
    u = np.asarray(u).astype(bool)
    v = np.asarray(v).astype(bool)
    n = instance.n
    if u.shape != (n,) or v.shape != (n,):
        raise DimensionMismatch(
            f"query shapes {u.shape}, {v.shape} do not match matrix size {n}")
    if store is None:
        store = new_store(instance)
    if mode not in ("undo", "monotone"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "monotone" and instance.alpha != 1.0:
        raise ValueError("monotone mode requires alpha = 1 (see module docstring)")

    K = instance.big_value
    tr = QueryTranscript()

    def op_add(vertex: int, amount: float):
        store.addvalue(vertex, amount)
        tr.ops.append(("addvalue", vertex, amount))

    def op_find(vertex: int) -> float:
        y = store.findflow(vertex)
        tr.ops.append(("findflow", vertex, None))
        tr.probes.append((vertex, y))
        return y

    answer = 0
    if mode == "undo":
        op_add(instance.hub, K)
        lowered = [int(instance.row_nodes[i]) for i in range(n) if u[i]]
        for d in lowered:
            op_add(d, -K)
        for j in range(n):
            if v[j]:
                y = op_find(int(instance.col_nodes[j]))
                if _decide_undo(float(instance.b[instance.col_nodes[j]]), y,
                                instance.alpha):
                    answer = 1
        for d in reversed(lowered):
            op_add(d, K)
        op_add(instance.hub, -K)
    else:
        raised = [int(instance.row_nodes[i]) for i in range(n) if u[i]]
        for d in raised:
            op_add(d, K)
        for j in range(n):
            if v[j]:
                c = int(instance.col_nodes[j])
                y = op_find(c)
                # Exact store: y = b(c) - baseline + K * (#hits); threshold
                # midway between the 0-hit and 1-hit levels.
                if y > float(instance.b[c]) - baseline + 0.5 * K:
                    answer = 1
        for j in range(n):
            op_add(int(instance.col_nodes[j]), K)
        for i in range(n):
            if not u[i]:
                op_add(int(instance.row_nodes[i]), K)
    tr.answer = answer
    return answer, tr


def run_sequence(M, queries: Sequence[Tuple[Sequence[int], Sequence[int]]],
                 alpha: float = 1.0, backend: str = "table", seed: int = 0,
                 mode: str = "undo", b=None
                 ) -> Tuple[List[int], List[QueryTranscript]]:
    """Answer a whole online query sequence against one persistent store."""
    instance = build_instance(M, alpha, b)
    store = new_store(instance, backend, seed)
    bits: List[int] = []
    transcripts: List[QueryTranscript] = []
    baseline = 0.0
    for u, v in queries:
        bit, tr = answer_query(instance, u, v, store, mode, baseline)
        bits.append(bit)
        transcripts.append(tr)
        if mode == "monotone":
            baseline += instance.big_value
    return bits, transcripts
