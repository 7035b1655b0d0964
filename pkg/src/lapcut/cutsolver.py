"""Randomized cut-based solver for Lp = b.

Potentials start at zero and always induce a flow through Ohm's law; each
iteration samples a fundamental cut of the spanning tree (with probability
proportional to r(edge)/R(cut)) and shifts the whole subtree's potentials by
the unique amount that restores conservation across that cut,

    delta = (S(C) - f(C)) * R(C).

Every such step raises the potential bound B(p) = 2 b.p - p^T L p by exactly
delta^2 / R(C), and the expected per-step rise equals gap(f_T, p) / tau for
the tree-defined flow f_T, which is what drives the (1 - 1/tau) contraction
towards the true solution.  After ceil(tau * ln(1/epsilon)) iterations the
expected squared L-norm error is at most epsilon times the solution's.

The iteration loop runs in a kernel (compiled when available); this module
does the setup, the instrumentation and the analysis-side quantities
(tree-defined flow, duality gap, expected gain).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import _kernels
from .errors import InfeasibleFlow
from .graph import (WeightedGraph, energy, flow_divergence, induced_flow,
                    potential_bound, validate_instance)
from .rng import SplitMix64
from .tree import (CutQuantities, RootedTree, build_tree, cut_quantities,
                   sampling_distribution, tau)
from .treeflow import TreeFlow

TRACE_LEVELS = ("none", "periteration", "withgap")


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 0.01
    max_iters: Optional[int] = None
    seed: int = 0
    tree_strategy: str = "mst"
    backend: str = "table"
    trace_level: str = "none"
    root: int = 0

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1.0):
            raise ValueError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if self.trace_level not in TRACE_LEVELS:
            raise ValueError(f"trace_level must be one of {TRACE_LEVELS}")


@dataclass(frozen=True)
class IterationTrace:
    """One solver step: sampled tree edge, applied increment, bound after
    the update and (with the gap trace) the duality gap before it."""

    t: int
    tree_edge: int
    delta: float
    bound: float
    gap: Optional[float] = None


@dataclass(frozen=True)
class SolveResult:
    p: np.ndarray
    iterations: int
    tau: float
    trace: Optional[List[IterationTrace]]
    tree: RootedTree = field(repr=False, compare=False, default=None)
    final_error_vs_oracle: Optional[float] = None


def iteration_budget(tau_value: float, epsilon: float) -> int:
    """ceil(tau * ln(1/epsilon)); the ceiling keeps the guarantee."""
    if epsilon >= 1.0:
        return 0
    return int(math.ceil(tau_value * math.log(1.0 / epsilon)))


def solve(graph: WeightedGraph, b, config: Optional[SolverConfig] = None,
          tree: Optional[RootedTree] = None) -> SolveResult:
    """Run the cut-update iterations and return potentials with p(root) = 0.

    A pre-built tree may be supplied (it must be rooted at config.root);
    otherwise one is constructed according to config.tree_strategy.
    """
    if config is None:
        config = SolverConfig()
    graph, b = validate_instance(graph, b)
    if tree is None:
        tree = build_tree(graph, config.tree_strategy, config.root)
    quantities = cut_quantities(graph, tree, b)
    tau_value = tau(graph, tree, quantities)
    niters = config.max_iters if config.max_iters is not None \
        else iteration_budget(tau_value, config.epsilon)

    n = graph.n
    if n == 1 or niters == 0:
        p = np.zeros(n, dtype=np.float64)
        trace = [] if config.trace_level != "none" else None
        return SolveResult(p, 0, tau_value, trace, tree)

    dist = sampling_distribution(graph, tree, quantities)
    tf = TreeFlow(graph, tree, b, config.backend, quantities)
    draws = SplitMix64(config.seed).uniform_block(niters)

    sub_lo = np.arange(1, n, dtype=np.int64)
    sub_hi = np.ascontiguousarray(tree.dfs_out[tree.order[1:]])
    trace_mode = TRACE_LEVELS.index(config.trace_level)
    empty_f = np.empty(0, dtype=np.float64)
    if config.backend == "table":
        cut_flow, H = tf._cut_flow, tf.table.H
    else:
        cut_flow, H = empty_f, np.empty((0, 0), dtype=np.float64)
    e_tpos = np.ascontiguousarray(tree.dfs_in[graph.tail])
    e_hpos = np.ascontiguousarray(tree.dfs_in[graph.head])
    b_pos = np.ascontiguousarray(b[tree.order])
    r_te = np.ascontiguousarray(graph.resistance[tree.tree_edges])

    out_cut = np.empty(niters, dtype=np.int64)
    out_delta = np.empty(niters, dtype=np.float64)
    out_bound = np.empty(niters if trace_mode >= 1 else 0, dtype=np.float64)
    out_gap = np.empty(niters if trace_mode >= 2 else 0, dtype=np.float64)

    _kernels.active.cut_solve_loop(
        draws, dist.cumulative, quantities.S, quantities.R, sub_lo, sub_hi,
        tf._vals, 1 if config.backend == "table" else 0,
        cut_flow, H,
        tf._cr_indptr, tf._cr_apos, tf._cr_bpos, tf._cr_w,
        trace_mode, b_pos, e_tpos, e_hpos,
        np.ascontiguousarray(graph.inv_resistance), r_te,
        out_cut, out_delta, out_bound, out_gap)

    p = tf._vals[tree.dfs_in] - tf._vals[0]
    trace = None
    if trace_mode >= 1:
        trace = [IterationTrace(t + 1,
                                int(tree.tree_edges[out_cut[t]]),
                                float(out_delta[t]),
                                float(out_bound[t]),
                                float(out_gap[t]) if trace_mode >= 2 else None)
                 for t in range(niters)]
    return SolveResult(p, niters, tau_value, trace, tree)


def cut_potential_flows(graph: WeightedGraph, tree: RootedTree, p,
                        quantities: CutQuantities) -> np.ndarray:
    """Flow out of every fundamental cut under the potential-induced flow."""
    f = induced_flow(graph, p)
    cr = quantities.crossings
    sgn = np.where(cr.tail_inside == 1, 1.0, -1.0)
    contrib = sgn * f[cr.edge]
    return np.add.reduceat(contrib, cr.indptr[:-1])


def tree_defined_flow(graph: WeightedGraph, tree: RootedTree, p, b,
                      quantities: Optional[CutQuantities] = None) -> np.ndarray:
    """The feasible b-flow that agrees with Ohm's law off the tree.

    Off-tree entries are the potential-induced flows; each tree edge then
    carries the unique amount that balances its fundamental cut.  Always a
    feasible b-flow; used by the analysis-side quantities, not the solver.
    """
    b = np.asarray(b, dtype=np.float64)
    if quantities is None:
        quantities = cut_quantities(graph, tree, b)
    p = np.asarray(p, dtype=np.float64)
    f = induced_flow(graph, p)
    totals = cut_potential_flows(graph, tree, p, quantities)

    te = tree.tree_edges
    children = tree.order[1:]
    # +1 where the tree edge's tail is the child (edge oriented out of the cut)
    sign_te = np.where(graph.tail[te] == children, 1.0, -1.0)
    off_tree_out = totals - sign_te * f[te]
    f = f.copy()
    f[te] = sign_te * (quantities.S - off_tree_out)
    return f


def duality_gap(graph: WeightedGraph, b, f, p) -> float:
    """E(f) - B(p) for a feasible b-flow f; the certificate of optimality.

    Feasibility is asserted to 1e-7 * ||b||_inf (plus a tiny absolute floor
    so exactly-conservative flows pass when b = 0).
    """
    b = np.asarray(b, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    resid = np.abs(flow_divergence(graph, f) - b).max() if graph.n else 0.0
    fmax = float(np.abs(f).max()) if f.size else 0.0
    tol = 1e-7 * float(np.abs(b).max()) + 1e-12 * max(1.0, fmax)
    if resid > tol:
        raise InfeasibleFlow(f"conservation violated by {resid:g} (tol {tol:g})")
    return energy(graph, f) - potential_bound(graph, b, p)


def duality_gap_edgewise(graph: WeightedGraph, f, p) -> float:
    """Edge-wise form of the gap: sum of r * (f - (p_i - p_j)/r)^2."""
    f = np.asarray(f, dtype=np.float64)
    d = f - induced_flow(graph, p)
    return float(np.dot(graph.resistance * d, d))


def expected_gain(graph: WeightedGraph, tree: RootedTree, b, p,
                  quantities: Optional[CutQuantities] = None) -> float:
    """Expected one-step increase of B(p) under the cut-sampling
    distribution, computed deterministically:

        sum over cuts of  P(cut) * delta(cut)^2 / R(cut),

    which equals gap(f_T(p), p) / tau.
    """
    b = np.asarray(b, dtype=np.float64)
    if quantities is None:
        quantities = cut_quantities(graph, tree, b)
    dist = sampling_distribution(graph, tree, quantities)
    flows = cut_potential_flows(graph, tree, p, quantities)
    delta = (quantities.S - flows) * quantities.R
    return float(np.dot(dist.probs, delta * delta * quantities.Rinv))
