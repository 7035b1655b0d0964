#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot paths on one seeded random instance:

  * the solver inner loop, with the table backend (O(n) per iteration via
    influence-table rows) and the naive backend (crossing-list scans);
  * the influence-table build (O(mn)).

Example:
    python3 benchmarks/bench_kernels.py --n 400 --m 1600 --iters 20000
"""

import argparse
import time

import numpy as np

from lapcut import _kernels
from lapcut.graph import validate_instance
from lapcut.instances import random_instance
from lapcut.rng import SplitMix64
from lapcut.tree import build_tree, cut_quantities, sampling_distribution
from lapcut.treeflow import TreeFlow


def prepare(n, m, seed):
    graph, b = random_instance(n, m, seed)
    _, b = validate_instance(graph, b)
    tree = build_tree(graph, "mst")
    quantities = cut_quantities(graph, tree, b)
    dist = sampling_distribution(graph, tree, quantities)
    return graph, b, tree, quantities, dist


def run_solve_loop(impl, graph, b, tree, quantities, dist, backend, iters, seed):
    tf = TreeFlow(graph, tree, b, backend, quantities)
    draws = SplitMix64(seed).uniform_block(iters)
    n = graph.n
    sub_lo = np.arange(1, n, dtype=np.int64)
    sub_hi = np.ascontiguousarray(tree.dfs_out[tree.order[1:]])
    if backend == "table":
        cut_flow, H = tf._cut_flow, tf.table.H
    else:
        cut_flow = np.empty(0)
        H = np.empty((0, 0))
    out_cut = np.empty(iters, dtype=np.int64)
    out_delta = np.empty(iters, dtype=np.float64)
    none = np.empty(0)
    t0 = time.perf_counter()
    impl.cut_solve_loop(
        draws, dist.cumulative, quantities.S, quantities.R, sub_lo, sub_hi,
        tf._vals, 1 if backend == "table" else 0, cut_flow, H,
        tf._cr_indptr, tf._cr_apos, tf._cr_bpos, tf._cr_w,
        0, np.ascontiguousarray(b[tree.order]),
        np.ascontiguousarray(tree.dfs_in[graph.tail]),
        np.ascontiguousarray(tree.dfs_in[graph.head]),
        np.ascontiguousarray(graph.inv_resistance),
        np.ascontiguousarray(graph.resistance[tree.tree_edges]),
        out_cut, out_delta, none, none)
    return time.perf_counter() - t0, tf._vals


def run_h_table(impl, graph, tree):
    n = graph.n
    H = np.zeros((n - 1, n - 1))
    t0 = time.perf_counter()
    impl.build_h_table(
        n, np.ascontiguousarray(tree.dfs_in[graph.tail]),
        np.ascontiguousarray(tree.dfs_in[graph.head]),
        np.ascontiguousarray(graph.inv_resistance),
        np.ascontiguousarray(tree.dfs_in[tree.parent[tree.order]]),
        np.ascontiguousarray(tree.dfs_out[tree.order[1:]]), H)
    return time.perf_counter() - t0, H


def best_of(repeat, fn, *args):
    times, payload = [], None
    for _ in range(repeat):
        dt, payload = fn(*args)
        times.append(dt)
    return min(times), payload


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--m", type=int, default=1600)
    ap.add_argument("--iters", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    graph, b, tree, quantities, dist = prepare(args.n, args.m, args.seed)
    impls = [("python", _kernels.fallback)]
    if _kernels.compiled is not None:
        impls.append(("compiled", _kernels.compiled))
    else:
        print("note: compiled kernels not built; timing the fallback only")

    print(f"instance: n={args.n} m={args.m} iters={args.iters} "
          f"(tau={dist.tau:.1f}), best of {args.repeat}")
    print(f"{'task':<22}" + "".join(f"{name:>12}" for name, _ in impls)
          + ("{:>10}".format("speedup") if len(impls) == 2 else ""))

    tasks = [
        ("solve loop / table", run_solve_loop,
         (graph, b, tree, quantities, dist, "table", args.iters, args.seed)),
        ("solve loop / naive", run_solve_loop,
         (graph, b, tree, quantities, dist, "naive", args.iters, args.seed)),
        ("influence table", run_h_table, (graph, tree)),
    ]
    for label, fn, fnargs in tasks:
        times = []
        payloads = []
        for _, impl in impls:
            dt, payload = best_of(args.repeat, fn, impl, *fnargs)
            times.append(dt)
            payloads.append(payload)
        if len(payloads) == 2:
            worst = float(np.abs(payloads[0] - payloads[1]).max())
            assert worst <= 1e-9, f"kernel disagreement {worst:g} on {label}"
        row = f"{label:<22}" + "".join(f"{dt * 1e3:>10.1f}ms" for dt in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
