"""Graph instances and the basic electrical-flow functionals.

An instance is an undirected connected graph with positive edge resistances
plus a supply vector that sums to zero.  Potentials live on vertices, flows
live on edges and are signed relative to the orientation fixed when the graph
is constructed.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import Disconnected, NonpositiveResistance, SupplyImbalance

SUPPLY_TOL = 1e-9


class WeightedGraph:
    """Undirected multigraph with fixed edge orientation and resistances.

    Vertices are dense 0-based integers.  Parallel edges are allowed,
    self-loops are not.  The orientation chosen at construction is permanent;
    all flow vectors are signed relative to it.  Instances are immutable:
    the backing arrays are marked read-only.
    """

    __slots__ = ("n", "m", "tail", "head", "resistance", "inv_resistance",
                 "adj_indptr", "adj_edge", "adj_other")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int, float]]):
        edges = list(edges)
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        self.n = int(n)
        self.m = len(edges)
        tail = np.empty(self.m, dtype=np.int64)
        head = np.empty(self.m, dtype=np.int64)
        resistance = np.empty(self.m, dtype=np.float64)
        for e, (u, v, r) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {e}: endpoint out of range: ({u}, {v})")
            if u == v:
                raise ValueError(f"edge {e}: self-loop at vertex {u}")
            tail[e], head[e], resistance[e] = u, v, r
        self.tail = tail
        self.head = head
        self.resistance = resistance
        with np.errstate(divide="ignore"):
            self.inv_resistance = np.where(resistance > 0.0, 1.0 / resistance, np.inf)

        # Adjacency in CSR form; per-vertex incidence lists are ordered by
        # edge id, which the deterministic tree constructions rely on.
        deg = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(deg, tail + 1, 1)
        np.add.at(deg, head + 1, 1)
        indptr = np.cumsum(deg)
        fill = indptr[:-1].copy()
        adj_edge = np.empty(2 * self.m, dtype=np.int64)
        adj_other = np.empty(2 * self.m, dtype=np.int64)
        for e in range(self.m):
            u, v = tail[e], head[e]
            adj_edge[fill[u]], adj_other[fill[u]] = e, v
            fill[u] += 1
            adj_edge[fill[v]], adj_other[fill[v]] = e, u
            fill[v] += 1
        self.adj_indptr = indptr
        self.adj_edge = adj_edge
        self.adj_other = adj_other
        for a in (self.tail, self.head, self.resistance, self.inv_resistance,
                  self.adj_indptr, self.adj_edge, self.adj_other):
            a.setflags(write=False)

    def incident(self, v: int):
        """(edge ids, other endpoints) of all edges at v, by edge id."""
        lo, hi = self.adj_indptr[v], self.adj_indptr[v + 1]
        return self.adj_edge[lo:hi], self.adj_other[lo:hi]

    def edge_tuple(self, e: int) -> Tuple[int, int, float]:
        return int(self.tail[e]), int(self.head[e]), float(self.resistance[e])

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m})"


def is_connected(graph: WeightedGraph) -> bool:
    """BFS reachability of every vertex from vertex 0."""
    n = graph.n
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        _, others = graph.incident(v)
        for w in others:
            if not seen[w]:
                seen[w] = True
                stack.append(int(w))
    return bool(seen.all())


def validate_instance(graph: WeightedGraph, b) -> Tuple[WeightedGraph, np.ndarray]:
    """Check the instance preconditions and canonicalize the supplies.

    Raises NonpositiveResistance, Disconnected or SupplyImbalance.  On
    success returns the graph together with the supply vector re-centered to
    sum exactly to zero (file rounding up to ``SUPPLY_TOL * ||b||_inf`` is
    accepted, anything larger is an error).
    """
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (graph.n,):
        raise ValueError(f"supply vector has shape {b.shape}, expected ({graph.n},)")
    bad = np.nonzero(~(graph.resistance > 0.0))[0]
    if bad.size:
        e = int(bad[0])
        raise NonpositiveResistance(e, float(graph.resistance[e]))
    if not is_connected(graph):
        raise Disconnected(f"graph with {graph.n} vertices is not connected")
    total = float(b.sum())
    scale = float(np.abs(b).max()) if b.size else 0.0
    if abs(total) > SUPPLY_TOL * scale:
        raise SupplyImbalance(total)
    centered = b - total / graph.n
    centered.setflags(write=False)
    return graph, centered


def laplacian_dense(graph: WeightedGraph) -> np.ndarray:
    """Dense weighted Laplacian; entry (i,j) sums -1/r over parallel edges."""
    L = np.zeros((graph.n, graph.n), dtype=np.float64)
    t, h, w = graph.tail, graph.head, graph.inv_resistance
    np.add.at(L, (t, t), w)
    np.add.at(L, (h, h), w)
    np.subtract.at(L, (t, h), w)
    np.subtract.at(L, (h, t), w)
    return L


def quadratic_form(graph: WeightedGraph, p) -> float:
    """sum over edges of (p_i - p_j)^2 / r."""
    p = np.asarray(p, dtype=np.float64)
    d = p[graph.tail] - p[graph.head]
    return float(np.dot(d * graph.inv_resistance, d))


def energy(graph: WeightedGraph, f) -> float:
    """sum over edges of r * f^2."""
    f = np.asarray(f, dtype=np.float64)
    return float(np.dot(f * graph.resistance, f))


def potential_bound(graph: WeightedGraph, b, p) -> float:
    """2 b.p - p^T L p; maximized exactly by solutions of Lp = b."""
    b = np.asarray(b, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    return 2.0 * float(np.dot(b, p)) - quadratic_form(graph, p)


def induced_flow(graph: WeightedGraph, p) -> np.ndarray:
    """Per-edge flow (p_i - p_j) / r implied by the potentials."""
    p = np.asarray(p, dtype=np.float64)
    return (p[graph.tail] - p[graph.head]) * graph.inv_resistance


def lnorm_error(graph: WeightedGraph, p, pstar) -> float:
    """Squared Laplacian-norm distance; invariant under constant shifts."""
    p = np.asarray(p, dtype=np.float64)
    pstar = np.asarray(pstar, dtype=np.float64)
    return quadratic_form(graph, pstar - p)


def flow_divergence(graph: WeightedGraph, f) -> np.ndarray:
    """Net outflow at each vertex; equals b for a feasible b-flow."""
    f = np.asarray(f, dtype=np.float64)
    out = np.zeros(graph.n, dtype=np.float64)
    np.add.at(out, graph.tail, f)
    np.subtract.at(out, graph.head, f)
    return out
