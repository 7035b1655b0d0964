"""Rooted spanning trees, fundamental cuts, stretch and cut quantities.

Every tree edge is identified with its child endpoint: removing the edge
cuts off exactly the subtree below that child.  Cuts are indexed 0..n-2 in
preorder of the child vertex, so cut k is the subtree whose root sits at
preorder position k+1.  That indexing makes subtree membership an interval
test on DFS timestamps and is shared by every consumer (the cut-flow data
structure, the influence table and the solver kernels).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import Disconnected, NotATreeEdge, TooLargeForExhaustive
from .graph import WeightedGraph

EXHAUSTIVE_MAX_N = 9

STRATEGIES = ("mst", "bfs", "exhaustive")


class RootedTree:
    """A spanning tree with parent links and DFS intervals.

    dfs_in/dfs_out are preorder timestamps with half-open semantics:
    u is in the subtree of v iff dfs_in[v] <= dfs_in[u] < dfs_out[v].
    Children are visited in ascending vertex id, so the traversal (and
    everything derived from it) is deterministic.
    """

    __slots__ = ("graph", "root", "parent", "parent_edge", "order",
                 "dfs_in", "dfs_out", "depth", "tree_edges", "cut_of_edge")

    def __init__(self, graph: WeightedGraph, parent, parent_edge, root: int):
        n = graph.n
        self.graph = graph
        self.root = int(root)
        self.parent = np.asarray(parent, dtype=np.int64)
        self.parent_edge = np.asarray(parent_edge, dtype=np.int64)

        children: List[List[int]] = [[] for _ in range(n)]
        for v in range(n):
            if v != self.root:
                children[self.parent[v]].append(v)

        order = np.empty(n, dtype=np.int64)
        dfs_in = np.empty(n, dtype=np.int64)
        dfs_out = np.empty(n, dtype=np.int64)
        depth = np.zeros(n, dtype=np.int64)
        clock = 0
        # Iterative DFS; (vertex, entering) pairs to set dfs_out on the way up.
        stack = [(self.root, True)]
        while stack:
            v, entering = stack.pop()
            if entering:
                order[clock] = v
                dfs_in[v] = clock
                clock += 1
                stack.append((v, False))
                for c in reversed(children[v]):
                    depth[c] = depth[v] + 1
                    stack.append((c, True))
            else:
                dfs_out[v] = clock
        self.order = order
        self.dfs_in = dfs_in
        self.dfs_out = dfs_out
        self.depth = depth

        # Cut k <-> child vertex order[k+1] <-> its parent edge.
        tree_edges = np.empty(max(n - 1, 0), dtype=np.int64)
        cut_of_edge = np.full(graph.m, -1, dtype=np.int64)
        for k in range(n - 1):
            child = order[k + 1]
            e = self.parent_edge[child]
            tree_edges[k] = e
            cut_of_edge[e] = k
        self.tree_edges = tree_edges
        self.cut_of_edge = cut_of_edge
        for a in (self.parent, self.parent_edge, self.order, self.dfs_in,
                  self.dfs_out, self.depth, self.tree_edges, self.cut_of_edge):
            a.setflags(write=False)

    @property
    def n(self) -> int:
        return self.graph.n

    def cut_index(self, v: int) -> int:
        """Index of the fundamental cut below vertex v (v != root)."""
        return int(self.dfs_in[v]) - 1

    def child_of_cut(self, k: int) -> int:
        return int(self.order[k + 1])

    def in_subtree(self, u: int, v: int) -> bool:
        return bool(self.dfs_in[v] <= self.dfs_in[u] < self.dfs_out[v])

    def subtree_vertices(self, v: int) -> np.ndarray:
        return np.sort(self.order[self.dfs_in[v]:self.dfs_out[v]])

    def __repr__(self):
        return f"RootedTree(n={self.n}, root={self.root})"


def tree_from_edges(graph: WeightedGraph, edge_ids: Sequence[int], root: int = 0) -> RootedTree:
    """Root an explicit spanning edge set.  Raises Disconnected if it does
    not span."""
    n = graph.n
    if len(edge_ids) != n - 1:
        raise ValueError(f"expected {n - 1} tree edges, got {len(edge_ids)}")
    incident: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    for e in edge_ids:
        u, v = int(graph.tail[e]), int(graph.head[e])
        incident[u].append((int(e), v))
        incident[v].append((int(e), u))
    parent = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    parent[root] = root
    stack = [int(root)]
    seen = 1
    while stack:
        v = stack.pop()
        for e, w in incident[v]:
            if parent[w] == -1:
                parent[w] = v
                parent_edge[w] = e
                seen += 1
                stack.append(w)
    if seen != n:
        raise Disconnected("edge set does not span the graph")
    return RootedTree(graph, parent, parent_edge, root)


def _mst_edges(graph: WeightedGraph) -> List[int]:
    # Kruskal; ties broken by lowest edge id for reproducibility.
    order = sorted(range(graph.m), key=lambda e: (graph.resistance[e], e))
    uf = list(range(graph.n))

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    chosen = []
    for e in order:
        ru, rv = find(int(graph.tail[e])), find(int(graph.head[e]))
        if ru != rv:
            uf[ru] = rv
            chosen.append(e)
            if len(chosen) == graph.n - 1:
                break
    if len(chosen) != graph.n - 1:
        raise Disconnected("graph is not connected")
    return chosen


def _bfs_edges(graph: WeightedGraph, root: int) -> List[int]:
    from collections import deque

    n = graph.n
    seen = np.zeros(n, dtype=bool)
    seen[root] = True
    q = deque([root])
    chosen = []
    while q:
        v = q.popleft()
        eids, others = graph.incident(v)
        for e, w in zip(eids, others):
            if not seen[w]:
                seen[w] = True
                chosen.append(int(e))
                q.append(int(w))
    if len(chosen) != n - 1:
        raise Disconnected("graph is not connected")
    return chosen


def _spans(graph: WeightedGraph, edge_ids) -> bool:
    uf = list(range(graph.n))

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    merged = 0
    for e in edge_ids:
        ru, rv = find(int(graph.tail[e])), find(int(graph.head[e]))
        if ru == rv:
            return False
        uf[ru] = rv
        merged += 1
    return merged == graph.n - 1


def build_tree(graph: WeightedGraph, strategy: str = "mst", root: int = 0) -> RootedTree:
    """Construct a rooted spanning tree.

    strategy:
      "mst"        minimum total resistance (Kruskal, lowest edge id on ties)
      "bfs"        breadth-first tree from the root
      "exhaustive" minimum-stretch tree by enumeration; only for n <= 9.
                   Ties go to the lexicographically smallest edge-id set.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown tree strategy {strategy!r}; pick one of {STRATEGIES}")
    if not (0 <= root < graph.n):
        raise ValueError(f"root {root} out of range")
    if strategy == "bfs":
        return tree_from_edges(graph, _bfs_edges(graph, root), root)
    if strategy == "mst":
        return tree_from_edges(graph, _mst_edges(graph), root)
    if graph.n > EXHAUSTIVE_MAX_N:
        raise TooLargeForExhaustive(
            f"exhaustive search is limited to n <= {EXHAUSTIVE_MAX_N}, got n = {graph.n}")
    best: Optional[Tuple[float, Tuple[int, ...]]] = None
    for subset in combinations(range(graph.m), graph.n - 1):
        if not _spans(graph, subset):
            continue
        candidate = tree_from_edges(graph, list(subset), root)
        st = stretch(graph, candidate)
        if best is None or st < best[0] - 1e-15 * max(1.0, abs(st)):
            best = (st, subset)
    if best is None:
        raise Disconnected("graph is not connected")
    return tree_from_edges(graph, list(best[1]), root)


def fundamental_cut(tree: RootedTree, edge_id: int) -> np.ndarray:
    """Vertex set below a tree edge (ascending ids).  Contains the child
    endpoint and not the parent endpoint."""
    k = int(tree.cut_of_edge[edge_id]) if 0 <= edge_id < tree.graph.m else -1
    if k < 0:
        raise NotATreeEdge(f"edge {edge_id} is not a tree edge")
    return tree.subtree_vertices(tree.child_of_cut(k))


def tree_path(tree: RootedTree, k: int, l: int) -> List[int]:
    """Edge ids of the unique tree path from k to l; empty iff k == l."""
    edges, _ = tree_path_signed(tree, k, l)
    return edges


def tree_path_signed(tree: RootedTree, k: int, l: int) -> Tuple[List[int], List[int]]:
    """Tree path from k to l with traversal signs.

    The sign of an edge is +1 where the walk follows the edge's fixed
    orientation (tail -> head) and -1 where it runs against it.
    """
    up_k: List[Tuple[int, int]] = []   # (edge, sign) walking k -> lca
    up_l: List[Tuple[int, int]] = []   # (edge, sign) walking l -> lca
    x, y = int(k), int(l)
    while x != y:
        if tree.depth[x] >= tree.depth[y]:
            e = int(tree.parent_edge[x])
            up_k.append((e, 1 if int(tree.graph.tail[e]) == x else -1))
            x = int(tree.parent[x])
        else:
            e = int(tree.parent_edge[y])
            # Walking l -> lca climbs y; on the k -> l path this edge is
            # traversed downward, so the sign flips.
            up_l.append((e, -1 if int(tree.graph.tail[e]) == y else 1))
            y = int(tree.parent[y])
    up_l.reverse()
    both = up_k + up_l
    return [e for e, _ in both], [s for _, s in both]


def per_edge_stretch(graph: WeightedGraph, tree: RootedTree) -> np.ndarray:
    """Stretch of each graph edge: tree-path resistance divided by r(e)."""
    out = np.empty(graph.m, dtype=np.float64)
    for e in range(graph.m):
        path = tree_path(tree, int(graph.tail[e]), int(graph.head[e]))
        out[e] = graph.resistance[path].sum() / graph.resistance[e]
    return out


def stretch(graph: WeightedGraph, tree: RootedTree) -> float:
    """Total stretch of the tree; every tree edge contributes exactly 1."""
    return float(per_edge_stretch(graph, tree).sum())


@dataclass(frozen=True)
class CutCrossings:
    """CSR listing of the graph edges crossing each fundamental cut.

    For entry t of cut k (indptr[k] <= t < indptr[k+1]), edge[t] crosses the
    cut and tail_inside[t] says whether its tail endpoint lies inside the
    subtree.  Built once per (graph, tree) by walking every edge's tree path:
    an edge crosses exactly the cuts of the tree edges on its path.
    """

    indptr: np.ndarray
    edge: np.ndarray
    tail_inside: np.ndarray

    def row(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[k], self.indptr[k + 1]
        return self.edge[lo:hi], self.tail_inside[lo:hi]


@dataclass(frozen=True)
class CutQuantities:
    """Per-cut supply S, crossing conductance Rinv and resistance R = 1/Rinv."""

    S: np.ndarray
    Rinv: np.ndarray
    R: np.ndarray
    crossings: CutCrossings


def cut_crossings(graph: WeightedGraph, tree: RootedTree) -> CutCrossings:
    ncuts = graph.n - 1
    rows_edge: List[List[int]] = [[] for _ in range(ncuts)]
    rows_tin: List[List[bool]] = [[] for _ in range(ncuts)]
    depth, parent, parent_edge = tree.depth, tree.parent, tree.parent_edge
    for e in range(graph.m):
        u, w = int(graph.tail[e]), int(graph.head[e])
        x, y = u, w
        # Climb both endpoints to the LCA; each tree edge passed on the
        # u-side has u inside its subtree, and symmetrically for w.
        while x != y:
            if depth[x] >= depth[y]:
                k = tree.cut_index(x)
                rows_edge[k].append(e)
                rows_tin[k].append(True)   # u side: tail is inside
                x = int(parent[x])
            else:
                k = tree.cut_index(y)
                rows_edge[k].append(e)
                rows_tin[k].append(False)  # w side: head is inside
                y = int(parent[y])
    counts = np.array([len(r) for r in rows_edge], dtype=np.int64)
    indptr = np.concatenate(([0], np.cumsum(counts)))
    edge = np.array([e for r in rows_edge for e in r], dtype=np.int64)
    tin = np.array([t for r in rows_tin for t in r], dtype=np.int8)
    for a in (indptr, edge, tin):
        a.setflags(write=False)
    return CutCrossings(indptr, edge, tin)


def cut_quantities(graph: WeightedGraph, tree: RootedTree, b,
                   crossings: Optional[CutCrossings] = None) -> CutQuantities:
    """S by the leaves-up recurrence, Rinv by accumulating 1/r over every
    edge's tree path (naive O(mn) route)."""
    b = np.asarray(b, dtype=np.float64)
    n = graph.n
    ncuts = n - 1
    if crossings is None:
        crossings = cut_crossings(graph, tree)

    acc = b.copy()
    S = np.empty(ncuts, dtype=np.float64)
    for pos in range(n - 1, 0, -1):   # children before parents in preorder
        v = int(tree.order[pos])
        S[pos - 1] = acc[v]
        acc[int(tree.parent[v])] += acc[v]

    Rinv = np.zeros(ncuts, dtype=np.float64)
    w = graph.inv_resistance
    for k in range(ncuts):
        eids, _ = crossings.row(k)
        Rinv[k] = w[eids].sum()
    R = 1.0 / Rinv
    for a in (S, Rinv, R):
        a.setflags(write=False)
    return CutQuantities(S, Rinv, R, crossings)


def tau(graph: WeightedGraph, tree: RootedTree,
        quantities: Optional[CutQuantities] = None) -> float:
    """sum over tree edges of r(e) / R(cut(e)); equals the total stretch."""
    if quantities is None:
        quantities = cut_quantities(graph, tree, np.zeros(graph.n))
    r_te = graph.resistance[tree.tree_edges]
    return float(np.dot(r_te, quantities.Rinv))


@dataclass(frozen=True)
class SamplingDistribution:
    """Cut-sampling distribution: P(cut) proportional to r(edge)/R(cut)."""

    probs: np.ndarray
    cumulative: np.ndarray
    tau: float

    def sample_index(self, u: float) -> int:
        """Inverse-CDF lookup for a uniform draw u in [0, 1)."""
        k = int(np.searchsorted(self.cumulative, u, side="right"))
        return min(k, len(self.probs) - 1)


def sampling_distribution(graph: WeightedGraph, tree: RootedTree,
                          quantities: Optional[CutQuantities] = None) -> SamplingDistribution:
    if quantities is None:
        quantities = cut_quantities(graph, tree, np.zeros(graph.n))
    weights = graph.resistance[tree.tree_edges] * quantities.Rinv
    total = float(weights.sum())
    probs = weights / total
    cumulative = np.cumsum(probs)
    probs.setflags(write=False)
    cumulative.setflags(write=False)
    return SamplingDistribution(probs, cumulative, total)
