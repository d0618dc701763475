from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcpattern.grid_scattering import (
    GridConfig,
    Scattering,
    build_grid,
    greedy_from_order,
    greedy_scattering,
    heuristic_lcp,
    induced_permutations,
    integer_root,
    max_scattering,
    maximum_matching,
    pattern_from_scattering,
    random_cloud,
    verify_result,
)
from lcpattern.lcp_exact import lcp_exact
from lcpattern.perm_core import Permutation, contains_pattern, is_witness
from oracles import max_scattering_brute


def grid_with_full(boxes, side):
    """Cloud with m=2 placing one point of each sequence at every box centre."""
    pts = [((c + 0.5) / side, (r + 0.5) / side) for r, c in boxes]
    cloud = np.array([pts, pts])
    return build_grid(cloud, GridConfig.with_side(len(pts), 2, side)), cloud


class TestConfig:
    @pytest.mark.parametrize("n,d,r", [(27, 3, 3), (26, 3, 2), (1000, 3, 10), (10**5, 3, 46), (1, 3, 1), (243, 5, 3), (10**6, 3, 100)])
    def test_integer_root(self, n, d, r):
        assert integer_root(n, d) == r

    def test_default_side(self):
        cfg = GridConfig(n=27, m=2)
        assert (cfg.r, cfg.side) == (3, 9)
        assert GridConfig(n=10**5, m=2).side == 46**2

    def test_scaled_side(self):
        assert GridConfig(n=27, m=2, c=0.5).side == 5
        assert GridConfig(n=27, m=2, c=2.0).side == 18

    def test_bad_scale(self):
        with pytest.raises(ValueError):
            GridConfig(n=10, m=2, c=0)


class TestBuildGrid:
    def test_single_point_each(self):
        cfg = GridConfig(n=1, m=2)
        grid = build_grid(np.array([[[0.2, 0.3]], [[0.9, 0.1]]]), cfg)
        assert cfg.side == 1 and grid.full_boxes == {(0, 0)}

    def test_all_in_one_box(self):
        cfg = GridConfig(n=27, m=2)
        cloud = np.full((2, 27, 2), 0.5)
        grid = build_grid(cloud, cfg)
        assert grid.full_boxes == {(4, 4)}
        assert list(grid.occupancy(4, 4)) == [27, 27]

    def test_boundary_clamped(self):
        cfg = GridConfig(n=1, m=2)
        grid = build_grid(np.array([[[1.0, 1.0]], [[0.0, 0.0]]]), cfg)
        assert grid.num_full == 1

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            build_grid(np.zeros((2, 5, 2)), GridConfig(n=6, m=2))

    @given(st.integers(1, 200), st.integers(2, 3), st.integers(0, 10**6))
    @settings(max_examples=50, deadline=None)
    def test_occupancy_invariants(self, n, m, seed):
        cfg = GridConfig(n=n, m=m)
        cloud = random_cloud(n, m, np.random.default_rng(seed))
        grid = build_grid(cloud, cfg)
        assert (grid.counts.sum(axis=0) == n).all()
        assert set(grid.full_ids.tolist()) == set(grid.box_ids[grid.counts.min(axis=1) >= 1].tolist())
        assert grid.num_full <= cfg.side**2
        # representatives are the lowest point index landing in the box
        ids = np.minimum(np.floor(cloud * cfg.side).astype(int), cfg.side - 1)
        box = ids[..., 1] * cfg.side + ids[..., 0]
        for f, bid in enumerate(grid.full_ids):
            for i in range(m):
                assert grid.representatives[f, i] == np.flatnonzero(box[i] == bid)[0]

    def test_dump_format(self):
        cloud = np.array([[[0.05, 0.05], [0.95, 0.05]], [[0.06, 0.07], [0.5, 0.5]]])
        grid = build_grid(cloud, GridConfig(n=2, m=2))
        assert (grid.side, grid.dump()) == (1, "0 0 2 2\n")
        cloud8 = np.array([[[0.05, 0.05], [0.95, 0.05]], [[0.06, 0.07], [0.5, 0.9]]])
        cfg = GridConfig(n=8, m=2)  # r=2, side=4
        full = np.concatenate([cloud8, np.full((2, 6, 2), 0.3)], axis=1)
        assert build_grid(full, cfg).dump() == "0 0 1 1\n0 3 1 0\n1 1 6 6\n3 2 0 1\n"


class TestGreedy:
    def test_disjoint(self):
        grid, _ = grid_with_full([(1, 1), (2, 2)], 3)
        for seed in range(5):
            assert len(greedy_scattering(grid, np.random.default_rng(seed))) == 2

    def test_all_orders_of_l_shape(self):
        boxes = [(1, 1), (1, 2), (2, 1)]
        sizes = sorted(len(greedy_from_order(order)) for order in permutations(boxes))
        assert sizes == [1, 1, 2, 2, 2, 2]

    def test_single_box(self):
        grid, _ = grid_with_full([(0, 2)], 3)
        assert len(greedy_scattering(grid, np.random.default_rng(0))) == 1

    def test_empty(self):
        cloud = np.array([[[0.1, 0.1]], [[0.9, 0.9]]])
        grid = build_grid(cloud, GridConfig(n=1, m=2, c=2.0))
        assert len(greedy_scattering(grid, np.random.default_rng(0))) == 0
        assert len(max_scattering(grid)) == 0

    def test_visit_order_uniform(self):
        grid, _ = grid_with_full([(1, 1), (1, 2), (2, 1)], 3)
        rng = np.random.default_rng(12)
        sizes = [len(greedy_scattering(grid, rng)) for _ in range(3000)]
        # size 1 iff (1,1) comes first: probability 1/3
        frac = sizes.count(1) / len(sizes)
        assert abs(frac - 1 / 3) < 4 * np.sqrt(2 / 9 / 3000)


class TestMatching:
    def test_l_shape(self):
        grid, _ = grid_with_full([(1, 1), (1, 2), (2, 1)], 3)
        s = max_scattering(grid)
        assert s.boxes == frozenset({(1, 2), (2, 1)})

    def test_diagonal(self):
        grid, _ = grid_with_full([(i, i) for i in range(6)], 6)
        assert len(max_scattering(grid)) == 6

    def test_long_augmenting_path(self):
        # staircase forcing an augmenting path through every row
        d = 1500
        adj = {r: [r, r + 1] if r < d - 1 else [r] for r in range(d)}
        adj = {r: adj[r][::-1] for r in adj}
        assert len(maximum_matching(adj)) == d

    @given(st.integers(1, 6), st.data())
    @settings(max_examples=150, deadline=None)
    def test_against_brute_force(self, side, data):
        cells = [(r, c) for r in range(side) for c in range(side)]
        boxes = data.draw(st.lists(st.sampled_from(cells), unique=True, max_size=10))
        if not boxes:
            return
        grid, _ = grid_with_full(boxes, side)
        s = max_scattering(grid)
        assert s.is_valid(grid)
        assert len(s) == max_scattering_brute(boxes)
        g = greedy_scattering(grid, np.random.default_rng(side))
        assert g.is_valid(grid) and len(g) <= len(s)


class TestPatternFromScattering:
    def test_diagonal_increasing(self):
        grid, cloud = grid_with_full([(0, 0), (1, 1)], 2)
        res = pattern_from_scattering(grid, Scattering(frozenset({(0, 0), (1, 1)})), cloud)
        assert res.pattern == Permutation((1, 2))

    def test_single_box(self):
        grid, cloud = grid_with_full([(2, 1), (0, 0)], 3)
        res = pattern_from_scattering(grid, Scattering(frozenset({(2, 1)})), cloud)
        assert res.pattern == Permutation((1,)) and all(len(w) == 1 for w in res.witnesses)

    def test_invalid(self):
        grid, cloud = grid_with_full([(0, 0), (0, 1)], 2)
        with pytest.raises(ValueError):
            pattern_from_scattering(grid, Scattering(frozenset({(0, 0), (0, 1)})), cloud)
        with pytest.raises(ValueError):
            pattern_from_scattering(grid, Scattering(frozenset({(1, 1)})), cloud)

    def test_n200_contains(self):
        rng = np.random.default_rng(3)
        cloud = random_cloud(200, 2, rng)
        perms = induced_permutations(cloud)
        for method in ("greedy", "matching"):
            res = heuristic_lcp(cloud, GridConfig(200, 2), method, rng)
            assert res.length >= 10
            for host, w in zip(perms, res.witnesses):
                assert is_witness(host, res.pattern, w)
                assert contains_pattern(host, res.pattern) is not None


class TestHeuristic:
    def test_below_exact(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            cloud = random_cloud(n, 2, rng)
            perms = induced_permutations(cloud)
            exact = lcp_exact(perms).length
            for method in ("greedy", "matching"):
                res = heuristic_lcp(cloud, GridConfig(n, 2), method, rng)
                assert verify_result(res, perms)
                assert res.length <= exact

    def test_matching_dominates_greedy(self):
        g, mt = [], []
        for seed in range(10):
            cloud = random_cloud(3000, 2, np.random.default_rng(seed))
            cfg = GridConfig(3000, 2)
            g.append(heuristic_lcp(cloud, cfg, "greedy", np.random.default_rng(seed)).length)
            mt.append(heuristic_lcp(cloud, cfg, "matching", np.random.default_rng(seed)).length)
        assert all(a <= b for a, b in zip(g, mt))

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            heuristic_lcp(np.zeros((2, 1, 2)), GridConfig(1, 2), "magic", np.random.default_rng())

    def test_three_permutations(self):
        rng = np.random.default_rng(4)
        cloud = random_cloud(5000, 3, rng)
        res = heuristic_lcp(cloud, GridConfig(5000, 3), "matching", rng)
        assert verify_result(res, induced_permutations(cloud))


class TestFullBoxStatistics:
    def test_mean_and_variance_of_full_count(self):
        n, m = 20000, 2
        cfg = GridConfig(n, m)
        rng = np.random.default_rng(99)
        F = np.array([build_grid(random_cloud(n, m, rng), cfg).num_full for _ in range(200)])
        R = cfg.r**m
        lower = 1 - m / (2 * cfg.r)
        assert lower - 0.05 <= F.mean() / R <= 1 + 0.05
        assert F.var(ddof=1) <= 1.5 * F.mean()
