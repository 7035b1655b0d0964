import numpy as np
import pytest

from lapcut.errors import NotATreeEdge, TooLargeForExhaustive
from lapcut.graph import WeightedGraph
from lapcut.instances import random_instance
from lapcut.rng import SplitMix64
from lapcut.tree import (build_tree, cut_quantities, fundamental_cut,
                         sampling_distribution, stretch, tau, tree_from_edges,
                         tree_path, tree_path_signed)

from conftest import random_instances


class TestBuildTree:
    def test_mst_avoids_heavy_edge(self):
        # triangle with one r=10 edge: MST must pick the two unit edges
        g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 10.0)])
        t = build_tree(g, "mst", root=0)
        assert sorted(t.tree_edges.tolist()) == [0, 1]

    @pytest.mark.parametrize("strategy", ["mst", "bfs", "exhaustive"])
    def test_tree_graph_is_its_own_tree(self, strategy, path3):
        g, _ = path3
        t = build_tree(g, strategy, root=0)
        assert sorted(t.tree_edges.tolist()) == [0, 1]

    def test_exhaustive_cycle4(self, cycle4):
        g, _ = cycle4
        t = build_tree(g, "exhaustive", root=0)
        assert stretch(g, t) == pytest.approx(6.0)
        # all four trees tie at 6; lexicographically smallest edge set wins
        assert sorted(t.tree_edges.tolist()) == [0, 1, 2]

    def test_exhaustive_size_guard(self):
        g, _ = random_instance(10, 12, 0)
        with pytest.raises(TooLargeForExhaustive):
            build_tree(g, "exhaustive")

    def test_exhaustive_at_most_min_stretch(self):
        # exhaustive must not be beaten by the other strategies
        for i in range(5):
            g, _ = random_instance(6, 9, [123, i])
            best = stretch(g, build_tree(g, "exhaustive"))
            for strategy in ("mst", "bfs"):
                assert best <= stretch(g, build_tree(g, strategy)) + 1e-9

    def test_unknown_strategy(self, path3):
        with pytest.raises(ValueError, match="strategy"):
            build_tree(path3[0], "magic")

    def test_dfs_intervals_characterize_subtrees(self):
        g, _ = random_instance(25, 60, 17)
        t = build_tree(g, "mst", root=5)
        for v in range(g.n):
            members = set(t.subtree_vertices(v).tolist())
            for u in range(g.n):
                assert (u in members) == t.in_subtree(u, v)

    def test_root_parent_conventions(self):
        g, _ = random_instance(12, 20, 3)
        t = build_tree(g, "bfs", root=4)
        assert t.parent[4] == 4
        assert t.parent_edge[4] == -1
        assert len(t.tree_edges) == g.n - 1


class TestCutsAndPaths:
    def test_fundamental_cut_path(self, path3):
        g, _ = path3
        t = build_tree(g, "mst", root=2)
        assert fundamental_cut(t, 0).tolist() == [0]        # edge (0,1)
        assert fundamental_cut(t, 1).tolist() == [0, 1]     # edge (1,2)

    def test_fundamental_cut_star_spokes(self, star5):
        g, _ = star5
        t = build_tree(g, "mst", root=0)
        for e in range(4):
            assert fundamental_cut(t, e).tolist() == [e + 1]

    def test_cut_contains_child_not_parent(self):
        g, _ = random_instance(20, 45, 21)
        t = build_tree(g, "mst", root=0)
        for k, e in enumerate(t.tree_edges):
            child = t.child_of_cut(k)
            cut = set(fundamental_cut(t, int(e)).tolist())
            assert child in cut
            assert int(t.parent[child]) not in cut

    def test_not_a_tree_edge(self, triangle):
        g, _ = triangle
        t = tree_from_edges(g, [0, 1], root=2)
        with pytest.raises(NotATreeEdge):
            fundamental_cut(t, 2)

    def test_tree_path_cases(self, path3):
        g, _ = path3
        t = build_tree(g, "mst", root=2)
        assert tree_path(t, 1, 1) == []
        assert tree_path(t, 0, 2) == [0, 1]
        assert tree_path(t, 2, 0) == [1, 0]

    def test_tree_path_star(self, star5):
        g, _ = star5
        t = build_tree(g, "mst", root=0)
        assert tree_path(t, 1, 2) == [0, 1]

    def test_signed_path_telescopes(self):
        # sum of signed r*f along the path equals the potential drop
        g, b = random_instance(18, 40, 33)
        t = build_tree(g, "mst", root=0)
        rng = np.random.default_rng(2)
        p = rng.standard_normal(g.n)
        from lapcut.graph import induced_flow
        f = induced_flow(g, p)
        for _ in range(20):
            k, l = rng.integers(0, g.n, 2)
            edges, signs = tree_path_signed(t, int(k), int(l))
            drop = sum(s * f[e] * g.resistance[e] for e, s in zip(edges, signs))
            assert drop == pytest.approx(p[k] - p[l], rel=1e-9, abs=1e-9)


class TestStretchAndTau:
    def test_tree_graph_stretch(self, path3):
        g, _ = path3
        t = build_tree(g, "mst")
        assert stretch(g, t) == pytest.approx(2.0)   # n - 1
        assert tau(g, t) == pytest.approx(2.0)

    def test_triangle_values(self, triangle):
        g, _ = triangle
        t = tree_from_edges(g, [0, 1], root=2)
        assert stretch(g, t) == pytest.approx(4.0)
        assert tau(g, t) == pytest.approx(4.0)

    def test_cycle4_path_tree(self, cycle4):
        g, _ = cycle4
        t = tree_from_edges(g, [0, 1, 2], root=0)
        assert stretch(g, t) == pytest.approx(6.0)
        assert tau(g, t) == pytest.approx(6.0)

    @pytest.mark.parametrize("strategy", ["mst", "bfs"])
    def test_tau_equals_stretch_random(self, strategy):
        rng = np.random.default_rng(0)
        for g, _ in random_instances(30, seed=31, n_hi=40):
            root = int(rng.integers(0, g.n))
            t = build_tree(g, strategy, root=root)
            s, tv = stretch(g, t), tau(g, t)
            assert tv == pytest.approx(s, rel=1e-9)

    def test_crossing_iff_on_path(self):
        # (k,l) crosses cut(i,j) exactly when (i,j) lies on path(k,l)
        for g, _ in random_instances(8, seed=37, n_lo=3, n_hi=12):
            t = build_tree(g, "mst", root=0)
            q = cut_quantities(g, t, np.zeros(g.n))
            for k, te in enumerate(t.tree_edges):
                cut = set(fundamental_cut(t, int(te)).tolist())
                crossing = {e for e in range(g.m)
                            if (int(g.tail[e]) in cut) != (int(g.head[e]) in cut)}
                on_path = {e for e in range(g.m)
                           if int(te) in tree_path(t, int(g.tail[e]), int(g.head[e]))}
                assert crossing == on_path
                listed = set(q.crossings.row(k)[0].tolist())
                assert listed == crossing


class TestCutQuantities:
    def test_path_values(self, path3):
        g, b = path3
        t = build_tree(g, "mst", root=2)
        q = cut_quantities(g, t, b)
        # cuts in preorder: {0,1} below edge (1,2), then {0} below (0,1)
        cut_sets = [set(fundamental_cut(t, int(e)).tolist()) for e in t.tree_edges]
        assert cut_sets == [{0, 1}, {0}]
        np.testing.assert_allclose(q.S, [1.0, 1.0])
        np.testing.assert_allclose(q.R, [1.0, 1.0])

    def test_triangle_values(self, triangle):
        g, b = triangle
        t = tree_from_edges(g, [0, 1], root=2)
        q = cut_quantities(g, t, b)
        np.testing.assert_allclose(q.S, [1.0, 1.0])
        np.testing.assert_allclose(q.R, [0.5, 0.5])

    def test_zero_supply(self, triangle):
        g, _ = triangle
        t = tree_from_edges(g, [0, 1], root=2)
        q = cut_quantities(g, t, np.zeros(3))
        np.testing.assert_allclose(q.S, 0.0)

    def test_supplies_match_brute_force(self):
        for g, b in random_instances(10, seed=41, n_hi=25):
            t = build_tree(g, "mst", root=0)
            q = cut_quantities(g, t, b)
            for k, e in enumerate(t.tree_edges):
                members = fundamental_cut(t, int(e))
                assert q.S[k] == pytest.approx(b[members].sum(), abs=1e-12)

    def test_resistances_match_brute_force(self):
        for g, _ in random_instances(10, seed=43, n_hi=25):
            t = build_tree(g, "bfs", root=0)
            q = cut_quantities(g, t, np.zeros(g.n))
            for k, e in enumerate(t.tree_edges):
                cut = set(fundamental_cut(t, int(e)).tolist())
                rinv = sum(1.0 / g.resistance[x] for x in range(g.m)
                           if (int(g.tail[x]) in cut) != (int(g.head[x]) in cut))
                assert q.Rinv[k] == pytest.approx(rinv, rel=1e-12)


class TestSamplingDistribution:
    def test_tree_graph_uniform(self):
        # on a tree graph r/R = 1 for every edge, whatever the resistances
        g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 3.0)])
        t = build_tree(g, "mst", root=0)
        d = sampling_distribution(g, t)
        np.testing.assert_allclose(d.probs, [0.5, 0.5])

    def test_triangle_uniform(self, triangle):
        g, _ = triangle
        t = tree_from_edges(g, [0, 1], root=2)
        d = sampling_distribution(g, t)
        np.testing.assert_allclose(d.probs, [0.5, 0.5])
        assert d.tau == pytest.approx(4.0)

    def test_sums_to_one(self):
        for g, _ in random_instances(20, seed=47, n_hi=40):
            d = sampling_distribution(g, build_tree(g, "mst"))
            assert abs(d.probs.sum() - 1.0) <= 1e-12

    def test_empirical_frequencies(self):
        g, _ = random_instance(12, 30, 53)
        t = build_tree(g, "mst", root=0)
        d = sampling_distribution(g, t)
        draws = SplitMix64(99).uniform_block(100_000)
        ks = np.minimum(np.searchsorted(d.cumulative, draws, side="right"),
                        len(d.probs) - 1)
        counts = np.bincount(ks, minlength=len(d.probs))
        n = len(draws)
        for k, pk in enumerate(d.probs):
            sigma = np.sqrt(n * pk * (1 - pk))
            assert abs(counts[k] - n * pk) <= 3.0 * sigma + 1.0

    def test_sample_index_edge_cases(self, triangle):
        g, _ = triangle
        t = tree_from_edges(g, [0, 1], root=2)
        d = sampling_distribution(g, t)
        assert d.sample_index(0.0) == 0
        assert d.sample_index(0.999999999) == 1
