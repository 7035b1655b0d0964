"""Cycle-repair baseline solver.

The mirror image of the cut-based method: it maintains a feasible b-flow at
all times (starting from the unique flow routed on the spanning tree) and
repeatedly repairs the potential law on a sampled fundamental cycle, i.e.
adds the circulation that zeroes sum(r * f) around the cycle.  Potentials
are read off the tree at the end.  This solver exists for cross-checks and
comparison, not speed: cycle updates touch each cycle edge directly.

Iteration count: ceil(tau_cycle * ln(1/epsilon) * rate_constant) with
tau_cycle = sum over non-tree edges of (r(e) + R(path)) / r(e).  The rate
constant (default 3) is an empirical allowance on top of the contraction
heuristic; this baseline's convergence is checked empirically in the test
suite, not guaranteed by the budget formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import GraphIsTree
from .graph import WeightedGraph, energy, potential_bound, validate_instance
from .rng import SplitMix64
from .tree import RootedTree, build_tree, tree_path_signed

RATE_CONSTANT = 3.0


@dataclass(frozen=True)
class PrimalConfig:
    epsilon: float = 0.01
    max_iters: Optional[int] = None
    seed: int = 0
    tree_strategy: str = "mst"
    trace_level: str = "none"   # "none" | "periteration"
    root: int = 0
    rate_constant: float = RATE_CONSTANT

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1.0):
            raise ValueError(f"epsilon must be in (0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class PrimalIterationTrace:
    t: int
    nontree_edge: int
    delta: float
    energy: float
    bound: float


@dataclass(frozen=True)
class PrimalResult:
    f: np.ndarray
    p: np.ndarray
    iterations: int
    tau_cycle: float
    trace: Optional[List[PrimalIterationTrace]]
    tree: RootedTree = field(repr=False, compare=False, default=None)


def tree_solve(tree: RootedTree, b) -> np.ndarray:
    """The unique b-flow supported on the tree edges (leaves-up)."""
    b = np.asarray(b, dtype=np.float64)
    graph = tree.graph
    f = np.zeros(graph.m, dtype=np.float64)
    acc = b.copy()
    for pos in range(graph.n - 1, 0, -1):
        v = int(tree.order[pos])
        e = int(tree.parent_edge[v])
        out = acc[v]                      # must leave the subtree through e
        f[e] = out if int(graph.tail[e]) == v else -out
        acc[int(tree.parent[v])] += out
    return f


@dataclass(frozen=True)
class FundamentalCycles:
    """Per non-tree edge: the directed fundamental cycle and its data."""

    nontree_edges: np.ndarray
    edges: List[np.ndarray]        # edge ids around each cycle
    signs: List[np.ndarray]        # +1 along the fixed orientation
    resistance: np.ndarray         # total r around each cycle


def fundamental_cycles(graph: WeightedGraph, tree: RootedTree) -> FundamentalCycles:
    nontree = np.array([e for e in range(graph.m) if tree.cut_of_edge[e] < 0],
                       dtype=np.int64)
    edges, signs, rsum = [], [], []
    for e in nontree:
        path_e, path_s = tree_path_signed(tree, int(graph.head[e]), int(graph.tail[e]))
        cyc_e = np.array([e] + path_e, dtype=np.int64)
        cyc_s = np.array([1] + path_s, dtype=np.float64)
        edges.append(cyc_e)
        signs.append(cyc_s)
        rsum.append(float(graph.resistance[cyc_e].sum()))
    return FundamentalCycles(nontree, edges, signs, np.array(rsum, dtype=np.float64))


def cycle_probabilities(graph: WeightedGraph, tree: RootedTree,
                        cycles: Optional[FundamentalCycles] = None
                        ) -> Tuple[FundamentalCycles, np.ndarray, np.ndarray, float]:
    """Distribution over non-tree edges with weight (r(e) + R(path)) / r(e).

    Returns (cycles, probs, cumulative, tau_cycle).  Raises GraphIsTree when
    there is no non-tree edge.
    """
    if cycles is None:
        cycles = fundamental_cycles(graph, tree)
    if len(cycles.nontree_edges) == 0:
        raise GraphIsTree("graph has no non-tree edge")
    weights = cycles.resistance / graph.resistance[cycles.nontree_edges]
    total = float(weights.sum())
    probs = weights / total
    return cycles, probs, np.cumsum(probs), total


def cycle_repair(graph: WeightedGraph, f, cycle_edges, cycle_signs) -> float:
    """Add the circulation that restores sum(r * f) = 0 around the cycle.

    Mutates f in place and returns the applied circulation delta.
    Conservation is untouched (a circulation has zero divergence).
    """
    r = graph.resistance[cycle_edges]
    residual = float(np.dot(r * cycle_signs, f[cycle_edges]))
    delta = -residual / float(r.sum())
    f[cycle_edges] += delta * cycle_signs
    return delta


def tree_induced_potentials(tree: RootedTree, f, r=None) -> np.ndarray:
    """Potentials read off the tree: p(root) = 0 and p(child) = p(parent)
    plus the Ohm's-law drop r * f along the parent edge."""
    graph = tree.graph
    f = np.asarray(f, dtype=np.float64)
    r = graph.resistance if r is None else np.asarray(r, dtype=np.float64)
    p = np.zeros(graph.n, dtype=np.float64)
    for pos in range(1, graph.n):
        v = int(tree.order[pos])
        e = int(tree.parent_edge[v])
        toward_parent = f[e] if int(graph.tail[e]) == v else -f[e]
        p[v] = p[int(tree.parent[v])] + r[e] * toward_parent
    return p


def solve_primal(graph: WeightedGraph, b, config: Optional[PrimalConfig] = None,
                 tree: Optional[RootedTree] = None) -> PrimalResult:
    """Sample-and-repair loop; returns the final flow and tree potentials."""
    if config is None:
        config = PrimalConfig()
    graph, b = validate_instance(graph, b)
    if tree is None:
        tree = build_tree(graph, config.tree_strategy, config.root)
    f = tree_solve(tree, b)
    traced = config.trace_level != "none"

    try:
        cycles, probs, cum, tau_cycle = cycle_probabilities(graph, tree)
    except GraphIsTree:
        p = tree_induced_potentials(tree, f)
        return PrimalResult(f, p, 0, 0.0, [] if traced else None, tree)

    niters = config.max_iters if config.max_iters is not None else (
        0 if config.epsilon >= 1.0 else
        int(math.ceil(tau_cycle * math.log(1.0 / config.epsilon)
                      * config.rate_constant)))
    draws = SplitMix64(config.seed).uniform_block(niters)
    ncyc = len(cycles.nontree_edges)
    ks = np.minimum(np.searchsorted(cum, draws, side="right"), ncyc - 1)

    trace: Optional[List[PrimalIterationTrace]] = [] if traced else None
    for t in range(niters):
        k = int(ks[t])
        delta = cycle_repair(graph, f, cycles.edges[k], cycles.signs[k])
        if traced:
            p_t = tree_induced_potentials(tree, f)
            trace.append(PrimalIterationTrace(
                t + 1, int(cycles.nontree_edges[k]), delta,
                energy(graph, f), potential_bound(graph, b, p_t)))
    p = tree_induced_potentials(tree, f)
    return PrimalResult(f, p, niters, tau_cycle, trace, tree)
