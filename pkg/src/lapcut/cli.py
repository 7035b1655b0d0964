"""Command-line interface: solve, bench, stretch, omv-demo."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys
import time
from typing import Optional

import numpy as np

from . import __version__, _kernels
from .cutsolver import SolverConfig, solve
from .cyclesolver import PrimalConfig, solve_primal
from .errors import LapcutError, ParseError
from .fileio import format_float, json_dumps, read_edge_list, read_supply
from .graph import lnorm_error, quadratic_form, validate_instance
from .instances import random_instance
from .omv import build_instance, run_sequence
from .oracle import boolean_vmv, dense_solve
from .tree import build_tree, cut_quantities, per_edge_stretch, tau
from . import tree as tree_mod

RESULT_SCHEMA = "lapcut-result/1"
BENCH_SCHEMA = "lapcut-bench/1"
STRETCH_SCHEMA = "lapcut-stretch/1"
OMV_SCHEMA = "lapcut-omv/1"

_SOLVER_ALIASES = {"cut": "cut", "dual": "cut", "cycle": "cycle", "primal": "cycle"}


def _solve_doc(args) -> dict:
    graph, base = read_edge_list(args.graph)
    b = read_supply(args.supply, graph.n, base)
    config = SolverConfig(epsilon=args.epsilon, seed=args.seed,
                          tree_strategy=args.tree, backend=args.backend,
                          trace_level=args.trace, root=args.root,
                          max_iters=args.max_iters)
    result = solve(graph, b, config)
    doc = {
        "schema": RESULT_SCHEMA,
        "epsilon": args.epsilon,
        "seed": args.seed,
        "tree": args.tree,
        "backend": args.backend,
        "root": args.root,
        "iterations": result.iterations,
        "tau": result.tau,
        "potentials": [float(x) for x in result.p],
        "trace": None,
        "oracle_check": None,
    }
    if result.trace is not None:
        doc["trace"] = [
            {"t": row.t, "edge": row.tree_edge, "delta": row.delta,
             "bound": row.bound, **({"gap": row.gap} if row.gap is not None else {})}
            for row in result.trace
        ]
    if args.oracle_check:
        _, b_c = validate_instance(graph, b)
        pstar = dense_solve(graph, b_c, root=args.root)
        err = lnorm_error(graph, result.p, pstar)
        norm = quadratic_form(graph, pstar)
        rel = err / norm if norm > 0 else 0.0
        result = dataclasses.replace(result, final_error_vs_oracle=rel)
        doc["oracle_check"] = {
            "lnorm_error_sq": err,
            "solution_norm_sq": norm,
            "relative_error": result.final_error_vs_oracle,
        }
    return doc


def cmd_solve(args) -> int:
    text = json_dumps(_solve_doc(args))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _bench_rows(args):
    rows = []
    solver = _SOLVER_ALIASES[args.solvers] if args.solvers != "both" else "both"
    wanted = ("cut", "cycle") if solver == "both" else (solver,)
    for trial in range(args.trials):
        graph, b = random_instance(args.n, args.m, [args.seed, trial])
        _, b = validate_instance(graph, b)
        pstar = dense_solve(graph, b)
        norm = quadratic_form(graph, pstar)
        for name in wanted:
            t0 = time.perf_counter()
            if name == "cut":
                res = solve(graph, b, SolverConfig(epsilon=args.epsilon,
                                                   seed=args.seed + trial))
                p, tau_v, iters = res.p, res.tau, res.iterations
            else:
                res = solve_primal(graph, b, PrimalConfig(epsilon=args.epsilon,
                                                          seed=args.seed + trial))
                p, tau_v, iters = res.p, res.tau_cycle, res.iterations
            wall = time.perf_counter() - t0
            rel = lnorm_error(graph, p, pstar) / norm if norm > 0 else 0.0
            rows.append({
                "schema": BENCH_SCHEMA,
                "trial": trial,
                "solver": name,
                "tau": format_float(tau_v),
                "iterations": iters,
                "rel_l_error": format_float(rel),
                "wall_time_s": format_float(wall),
            })
    return rows


def cmd_bench(args) -> int:
    if args.n < 2:
        raise ParseError("<args>", 0, "--n must be >= 2")
    if args.m < args.n - 1:
        raise ParseError("<args>", 0, f"--m must be >= n - 1 = {args.n - 1}")
    if args.trials < 1:
        raise ParseError("<args>", 0, "--trials must be >= 1")
    rows = _bench_rows(args)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["schema", "trial", "solver", "tau",
                                             "iterations", "rel_l_error",
                                             "wall_time_s"])
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    if args.csv_out:
        with open(args.csv_out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_stretch(args) -> int:
    graph, _ = read_edge_list(args.graph)
    validate_instance(graph, np.zeros(graph.n))
    tree = build_tree(graph, args.tree, args.root)
    quantities = cut_quantities(graph, tree, np.zeros(graph.n))
    per_edge = per_edge_stretch(graph, tree)
    st = float(per_edge.sum())
    tau_v = tau(graph, tree, quantities)
    rel = abs(st - tau_v) / max(abs(st), 1e-300)
    p50, p90, p99 = (float(np.percentile(per_edge, q)) for q in (50, 90, 99))
    lines = [
        f"schema: {STRETCH_SCHEMA}",
        f"vertices: {graph.n}",
        f"edges: {graph.m}",
        f"tree: {args.tree}",
        f"root: {args.root}",
        f"stretch: {format_float(st)}",
        f"tau: {format_float(tau_v)}",
        f"rel_diff: {format_float(rel)}",
        f"stretch_p50: {format_float(p50)}",
        f"stretch_p90: {format_float(p90)}",
        f"stretch_p99: {format_float(p99)}",
        f"stretch_max: {format_float(float(per_edge.max()))}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    if rel > 1e-9:
        sys.stderr.write(f"error: stretch and tau differ by {rel:g} (> 1e-9)\n")
        return 1
    return 0


def cmd_omv_demo(args) -> int:
    if args.n < 1:
        raise ParseError("<args>", 0, "--n must be >= 1")
    if args.queries < 0:
        raise ParseError("<args>", 0, "--queries must be >= 0")
    rng = np.random.default_rng([args.seed, 2])
    M = rng.integers(0, 2, size=(args.n, args.n))
    queries = [(rng.integers(0, 2, size=args.n), rng.integers(0, 2, size=args.n))
               for _ in range(args.queries)]
    instance = build_instance(M, args.alpha)
    bits, transcripts = run_sequence(M, queries, alpha=args.alpha,
                                     backend=args.backend, seed=args.seed)
    expected = [boolean_vmv(M, u, v) for u, v in queries]
    agree = sum(int(a == e) for a, e in zip(bits, expected))
    total_ops = sum(len(tr.ops) for tr in transcripts)
    lines = [
        f"schema: {OMV_SCHEMA}",
        f"n: {args.n}",
        f"queries: {args.queries}",
        f"alpha: {format_float(args.alpha)}",
        f"backend: {args.backend}",
        f"big_value: {format_float(instance.big_value)}",
        f"agreement: {agree}/{args.queries} agree",
        f"treeflow_ops: {total_ops}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    if agree != args.queries:
        sys.stderr.write(f"error: {args.queries - agree} mismatches against the "
                         "brute-force product\n")
        return 1
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lapcut",
        description="Randomized cut-based solver for graph Laplacian systems "
                    f"(kernels: {_kernels.ACTIVE_NAME}).")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser(
        "solve", help="solve Lp = b for an edge-list instance",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Output: one JSON document (schema lapcut-result/1) with fields:\n"
            "  schema       schema version string\n"
            "  epsilon      requested accuracy (iterations = ceil(tau*ln(1/epsilon)))\n"
            "  seed         RNG seed of the run\n"
            "  tree         spanning-tree strategy (mst|bfs|exhaustive)\n"
            "  backend      per-iteration backend (table|naive)\n"
            "  root         root vertex (potentials are shifted so p(root)=0)\n"
            "  iterations   number of cut updates performed\n"
            "  tau          sum over tree edges of r(edge)/R(cut); equals the stretch\n"
            "  potentials   final potentials, one per vertex, 17 significant digits\n"
            "  trace        null, or rows {t, edge, delta, bound[, gap]} per iteration\n"
            "  oracle_check null, or {lnorm_error_sq, solution_norm_sq, relative_error}\n"
            "Floats round-trip losslessly (17 significant digits)."))
    ps.add_argument("graph", help="edge-list file: lines 'u v r'")
    ps.add_argument("supply", help="supply file: lines 'v b'; missing vertices are 0")
    ps.add_argument("--epsilon", type=float, default=0.01)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--tree", choices=tree_mod.STRATEGIES, default="mst")
    ps.add_argument("--backend", choices=("table", "naive"), default="table")
    ps.add_argument("--trace", choices=("none", "periteration", "withgap"),
                    default="none")
    ps.add_argument("--root", type=int, default=0)
    ps.add_argument("--max-iters", type=int, default=None,
                    help="override the iteration budget")
    ps.add_argument("--oracle-check", action="store_true",
                    help="compare against the dense solve")
    ps.add_argument("--out", default=None, help="write the document here instead of stdout")
    ps.set_defaults(func=cmd_solve)

    pb = sub.add_parser(
        "bench", help="benchmark solvers on seeded random instances",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Output: RFC-4180 CSV (schema lapcut-bench/1) with columns:\n"
            "  schema       schema version string\n"
            "  trial        trial index (instance seed is [seed, trial])\n"
            "  solver       'cut' (cut updates) or 'cycle' (cycle repairs)\n"
            "  tau          the solver's stretch-type constant on that instance\n"
            "  iterations   iterations performed\n"
            "  rel_l_error  ||p* - p||_L^2 / ||p*||_L^2 against the dense solve\n"
            "  wall_time_s  wall-clock seconds (the one nondeterministic column)\n"
            "Instances: random tree plus extra edges, resistances log-uniform in\n"
            "[0.1, 10], supplies standard normal recentered to sum 0."))
    pb.add_argument("--n", type=int, required=True)
    pb.add_argument("--m", type=int, required=True)
    pb.add_argument("--trials", type=int, default=5)
    pb.add_argument("--epsilon", type=float, default=0.01)
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--solvers", choices=sorted(_SOLVER_ALIASES) + ["both"],
                    default="cut",
                    help="'dual' and 'primal' are aliases of 'cut' and 'cycle'")
    pb.add_argument("--csv-out", default=None)
    pb.set_defaults(func=cmd_bench)

    pt = sub.add_parser(
        "stretch", help="report stretch, tau and per-edge stretch percentiles",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Output fields (key: value lines, schema lapcut-stretch/1):\n"
            "  vertices, edges     instance size\n"
            "  tree, root          spanning-tree strategy and root\n"
            "  stretch             total stretch of the tree\n"
            "  tau                 sum of r(edge)/R(cut) over tree edges\n"
            "  rel_diff            |stretch - tau| / stretch; exits 1 if > 1e-9\n"
            "  stretch_p50/p90/p99/max   per-edge stretch percentiles"))
    pt.add_argument("graph")
    pt.add_argument("--tree", choices=tree_mod.STRATEGIES, default="mst")
    pt.add_argument("--root", type=int, default=0)
    pt.set_defaults(func=cmd_stretch)

    po = sub.add_parser(
        "omv-demo", help="online Boolean u^T M v queries through the cut-flow "
                         "structure, checked against the brute-force product",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Output fields (key: value lines, schema lapcut-omv/1):\n"
            "  n, queries, alpha, backend   demo parameters\n"
            "  big_value    the lift constant (exceeds ||r||inf*||b||inf*alpha^2)\n"
            "  agreement    'X/Y agree' against the brute-force Boolean product\n"
            "  treeflow_ops total addvalue/findflow operations issued\n"
            "Exits nonzero on any mismatch."))
    po.add_argument("--n", type=int, default=16)
    po.add_argument("--queries", type=int, default=16)
    po.add_argument("--alpha", type=float, default=1.0)
    po.add_argument("--seed", type=int, default=0)
    po.add_argument("--backend", choices=("table", "naive"), default="table")
    po.set_defaults(func=cmd_omv_demo)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, OSError) as exc:   # bad parameters, unreadable files
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except LapcutError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
