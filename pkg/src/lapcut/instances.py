"""Seeded random instances for benchmarks and tests.

A random connected graph is a uniform random recursive tree plus extra
random edges (parallel edges allowed, self-loops not), with resistances
log-uniform in [r_low, r_high].  Supplies are standard normals recentered
to sum to zero.  Everything is driven by numpy's seeded Generator, so a
given seed always produces the same instance.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

from .graph import WeightedGraph


def random_connected_graph(n: int, m: int, seed,
                           r_low: float = 0.1, r_high: float = 10.0) -> WeightedGraph:
    if n < 1:
        raise ValueError("need n >= 1")
    if m < n - 1:
        raise ValueError(f"need m >= n - 1 = {n - 1} edges for connectivity, got {m}")
    rng = np.random.default_rng(seed)
    edges = []
    for v in range(1, n):
        edges.append((int(rng.integers(0, v)), v))
    while len(edges) < m:
        u, v = rng.integers(0, n, size=2)
        if u != v:
            edges.append((int(u), int(v)))
    r = np.exp(rng.uniform(np.log(r_low), np.log(r_high), size=m))
    return WeightedGraph(n, [(u, v, float(r[i])) for i, (u, v) in enumerate(edges)])


def random_supply(n: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    b = rng.standard_normal(n)
    return b - b.mean()


def random_instance(n: int, m: int, seed) -> Tuple[WeightedGraph, np.ndarray]:
    """Graph and supplies from independent sub-seeds of `seed`."""
    graph = random_connected_graph(n, m, [seed, 0])
    b = random_supply(n, [seed, 1])
    return graph, b
