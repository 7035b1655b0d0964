import numpy as np
import pytest

from lapcut.graph import WeightedGraph
from lapcut.instances import random_instance


@pytest.fixture
def path3():
    """Path 0-1-2, unit resistances, one unit pushed from 0 to 2."""
    g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0)])
    b = np.array([1.0, 0.0, -1.0])
    return g, b


@pytest.fixture
def triangle():
    """Triangle on 0,1,2 with unit resistances, supply (1, 0, -1)."""
    g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    b = np.array([1.0, 0.0, -1.0])
    return g, b


@pytest.fixture
def cycle4():
    g = WeightedGraph(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
    b = np.array([1.0, 0.0, -1.0, 0.0])
    return g, b


@pytest.fixture
def star5():
    """Star with center 0 and four leaves."""
    g = WeightedGraph(5, [(1, 0, 1.0), (2, 0, 1.0), (3, 0, 1.0), (4, 0, 1.0)])
    b = np.array([0.0, 2.0, -1.0, -1.0, 0.0])
    return g, b


def random_instances(count, seed, n_lo=2, n_hi=40, extra_hi=None):
    """Seeded stream of (graph, b) with n uniform in [n_lo, n_hi]."""
    rng = np.random.default_rng([seed, 99])
    out = []
    for i in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        hi = extra_hi if extra_hi is not None else max(2 * n, n + 1)
        m = int(rng.integers(n - 1, (n - 1) + hi + 1))
        out.append(random_instance(n, max(m, n - 1), [seed, i]))
    return out
