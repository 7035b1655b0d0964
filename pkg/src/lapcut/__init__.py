"""lapcut: randomized cut-based solver for graph Laplacian systems.

The core algorithm maintains vertex potentials (so Ohm's law holds by
construction) and repeatedly restores current conservation across sampled
fundamental cuts of a low-stretch spanning tree.  The package also ships the
cycle-repair baseline that works on flows instead, an exact dense oracle,
the subtree-update/cut-flow data structure in two backends, and an
executable reduction showing that the data structure answers online Boolean
vector-matrix-vector queries.
"""

__version__ = "0.1.0"

from ._kernels import ACTIVE_NAME as kernel_backend, HAVE_COMPILED as have_compiled_kernels
from .cutsolver import (IterationTrace, SolveResult, SolverConfig, duality_gap,
                        duality_gap_edgewise, expected_gain, solve,
                        tree_defined_flow)
from .cyclesolver import (PrimalConfig, PrimalResult, cycle_probabilities,
                          cycle_repair, solve_primal, tree_induced_potentials,
                          tree_solve)
from .errors import LapcutError
from .graph import (WeightedGraph, energy, induced_flow, laplacian_dense,
                    lnorm_error, potential_bound, quadratic_form,
                    validate_instance)
from .omv import ReductionInstance, answer_query, build_instance, run_sequence
from .oracle import boolean_vmv, dense_solve, electrical_flow
from .rng import SplitMix64
from .tree import (RootedTree, build_tree, cut_quantities, fundamental_cut,
                   sampling_distribution, stretch, tau, tree_from_edges,
                   tree_path)
from .treeflow import ApproxTreeFlow, InfluenceTable, TreeFlow, build_h_table

__all__ = [
    "ApproxTreeFlow", "InfluenceTable", "IterationTrace", "LapcutError",
    "PrimalConfig", "PrimalResult", "ReductionInstance", "RootedTree",
    "SolveResult", "SolverConfig", "SplitMix64", "TreeFlow", "WeightedGraph",
    "answer_query", "boolean_vmv", "build_h_table", "build_instance",
    "build_tree", "cut_quantities", "cycle_probabilities", "cycle_repair",
    "dense_solve", "duality_gap", "duality_gap_edgewise", "electrical_flow",
    "energy", "expected_gain", "fundamental_cut", "have_compiled_kernels",
    "induced_flow", "kernel_backend", "laplacian_dense", "lnorm_error",
    "potential_bound", "quadratic_form", "run_sequence",
    "sampling_distribution", "solve", "solve_primal", "stretch", "tau",
    "tree_defined_flow", "tree_from_edges", "tree_induced_potentials",
    "tree_path", "tree_solve", "validate_instance",
]
