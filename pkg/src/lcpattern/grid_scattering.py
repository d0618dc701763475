"""Grid partition of the unit square, full boxes and scatterings.

Boxes are addressed as ``(row, col)`` with ``row = floor(y * side)`` and
``col = floor(x * side)``, both 0-based.  A point cloud is an array of shape
``(m, n, 2)``: ``cloud[i, j]`` is point j generating permutation i.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .lcp_exact import LcpResult
from .perm_core import Permutation, Witness, pattern_of, permutation_from_points, point_ranks


def integer_root(n: int, d: int) -> int:
    """floor(n ** (1/d)) without float misrounding."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = int(round(n ** (1.0 / d)))
    while r > 1 and r**d > n:
        r -= 1
    while (r + 1) ** d <= n:
        r += 1
    return max(r, 1)


@dataclass(frozen=True)
class GridConfig:
    n: int
    m: int
    c: float = 1.0
    r: int = field(init=False)
    side: int = field(init=False)

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if not self.c > 0:
            raise ValueError("grid scale c must be positive")
        r = integer_root(self.n, 2 * self.m - 1)
        base = r**self.m
        # Ceiling with a small guard so c=1 (and c*base integral) is exact.
        side = base if self.c == 1 else max(1, math.ceil(self.c * base - 1e-9))
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "side", side)

    @classmethod
    def with_side(cls, n: int, m: int, side: int) -> "GridConfig":
        """Config with an explicit number of boxes per axis."""
        if side < 1:
            raise ValueError("side must be >= 1")
        cfg = cls(n=n, m=m)
        object.__setattr__(cfg, "side", int(side))
        object.__setattr__(cfg, "c", side / cfg.r**m)
        return cfg


def as_cloud(cloud) -> np.ndarray:
    arr = np.asarray(cloud, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("point cloud must have shape (m, n, 2)")
    return arr


def random_cloud(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    return rng.random((m, n, 2))


def induced_permutations(cloud) -> list[Permutation]:
    return [permutation_from_points(row) for row in as_cloud(cloud)]


@dataclass(frozen=True)
class Grid:
    """Sparse occupancy of a side x side grid.

    ``box_ids`` lists occupied boxes (id = row * side + col) in ascending
    order, ``counts[b, i]`` is the number of points of sequence i in box
    ``box_ids[b]``.  ``full_ids`` are the full boxes, ascending, and
    ``representatives[f, i]`` is the lowest point index j of sequence i in
    full box ``full_ids[f]``.
    """

    config: GridConfig
    box_ids: np.ndarray
    counts: np.ndarray
    full_ids: np.ndarray
    representatives: np.ndarray

    @property
    def side(self) -> int:
        return self.config.side

    @property
    def full_boxes(self) -> set[tuple[int, int]]:
        return {self.box_of(b) for b in self.full_ids.tolist()}

    @property
    def num_full(self) -> int:
        return len(self.full_ids)

    def box_of(self, box_id: int) -> tuple[int, int]:
        return divmod(int(box_id), self.side)

    def occupancy(self, row: int, col: int) -> np.ndarray:
        bid = row * self.side + col
        pos = np.searchsorted(self.box_ids, bid)
        if pos < len(self.box_ids) and self.box_ids[pos] == bid:
            return self.counts[pos].copy()
        return np.zeros(self.config.m, dtype=np.int64)

    def is_full(self, row: int, col: int) -> bool:
        bid = row * self.side + col
        pos = np.searchsorted(self.full_ids, bid)
        return bool(pos < len(self.full_ids) and self.full_ids[pos] == bid)

    def dump(self) -> str:
        """One line ``row col count_1 ... count_m`` per occupied box."""
        lines = []
        for bid, cnt in zip(self.box_ids.tolist(), self.counts.tolist()):
            row, col = divmod(bid, self.side)
            lines.append(" ".join(map(str, (row, col, *cnt))))
        return "\n".join(lines) + ("\n" if lines else "")


def box_indices(cloud: np.ndarray, side: int) -> np.ndarray:
    """Box id of every point, shape (m, n)."""
    cell = np.floor(cloud * side).astype(np.int64)
    np.clip(cell, 0, side - 1, out=cell)
    return cell[..., 1] * side + cell[..., 0]


def build_grid(cloud, config: GridConfig) -> Grid:
    cloud = as_cloud(cloud)
    m, n, _ = cloud.shape
    if (m, n) != (config.m, config.n):
        raise ValueError(f"cloud is {m}x{n} but config expects {config.m}x{config.n}")
    ids = box_indices(cloud, config.side)

    box_ids = np.unique(ids)
    counts = np.zeros((len(box_ids), m), dtype=np.int64)
    first = np.full((len(box_ids), m), n, dtype=np.int64)
    for i in range(m):
        pos = np.searchsorted(box_ids, ids[i])
        np.add.at(counts[:, i], pos, 1)
        np.minimum.at(first[:, i], pos, np.arange(n))
    full_mask = counts.min(axis=1) >= 1
    return Grid(
        config=config,
        box_ids=box_ids,
        counts=counts,
        full_ids=box_ids[full_mask],
        representatives=first[full_mask],
    )


@dataclass(frozen=True)
class Scattering:
    boxes: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.boxes)

    def is_valid(self, grid: Optional[Grid] = None) -> bool:
        rows = [b[0] for b in self.boxes]
        cols = [b[1] for b in self.boxes]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            return False
        if grid is not None:
            return all(grid.is_full(r, c) for r, c in self.boxes)
        return True


def greedy_from_order(boxes: Iterable[tuple[int, int]]) -> Scattering:
    """Keep each box that shares no row or column with a kept box."""
    rows: set[int] = set()
    cols: set[int] = set()
    kept = []
    for r, c in boxes:
        if r not in rows and c not in cols:
            rows.add(r)
            cols.add(c)
            kept.append((r, c))
    return Scattering(frozenset(kept))


def greedy_scattering(grid: Grid, rng: np.random.Generator) -> Scattering:
    order = rng.permutation(len(grid.full_ids))
    side = grid.side
    return greedy_from_order(divmod(int(b), side) for b in grid.full_ids[order])


def maximum_matching(adj: dict[int, list[int]]) -> dict[int, int]:
    """Hopcroft-Karp on a bipartite graph given as left -> neighbours.

    Returns the matching as left -> right.  Iterative DFS, so augmenting
    paths may be arbitrarily long.
    """
    left = sorted(adj)
    match_l: dict[int, int] = {}
    match_r: dict[int, int] = {}
    inf = math.inf
    while True:
        dist: dict[int, float] = {}
        queue = deque()
        for u in left:
            if u not in match_l:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = inf
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r.get(v)
                if w is None:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            return match_l

        pointer = {u: 0 for u in left}
        for root in left:
            if root in match_l:
                continue
            stack = [root]
            path_v: list[int] = []
            while stack:
                u = stack[-1]
                nbrs = adj[u]
                advanced = False
                while pointer[u] < len(nbrs):
                    v = nbrs[pointer[u]]
                    pointer[u] += 1
                    w = match_r.get(v)
                    if w is None:
                        path_v.append(v)
                        for uu, vv in zip(stack, path_v):
                            match_l[uu] = vv
                            match_r[vv] = uu
                        stack = []
                        advanced = True
                        break
                    if dist.get(w) == dist[u] + 1:
                        path_v.append(v)
                        stack.append(w)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = inf
                    stack.pop()
                    if path_v:
                        path_v.pop()


def max_scattering(grid: Grid) -> Scattering:
    """Maximum scattering as a maximum matching of rows to columns."""
    adj: dict[int, list[int]] = {}
    for b in grid.full_ids.tolist():
        r, c = divmod(b, grid.side)
        adj.setdefault(r, []).append(c)
    matching = maximum_matching(adj)
    return Scattering(frozenset(matching.items()))


def pattern_from_scattering(grid: Grid, scattering: Scattering, cloud) -> LcpResult:
    """Common pattern induced by ``scattering`` with one witness per sequence.

    Boxes sorted by column give the pattern positions; their rows give the
    relative values.  Each witness is built from the representative point
    of every box, located by its x-rank in the induced permutation.
    """
    cloud = as_cloud(cloud)
    if not scattering.is_valid(grid):
        raise ValueError("invalid scattering: row/column collision or non-full box")
    if len(scattering) == 0:
        raise ValueError("empty scattering induces no pattern")
    boxes = sorted(scattering.boxes, key=lambda b: b[1])
    sigma = pattern_of([r for r, _ in boxes])
    side = grid.side
    ids = np.array([r * side + c for r, c in boxes], dtype=np.int64)
    reps = grid.representatives[np.searchsorted(grid.full_ids, ids)]

    witnesses = []
    for i, row in enumerate(cloud):
        xr, _ = point_ranks(row)
        positions = xr[reps[:, i]] + 1
        witnesses.append(Witness(tuple(positions.tolist())))
    return LcpResult(len(boxes), sigma, tuple(witnesses))


def verify_result(result: LcpResult, perms) -> bool:
    """Check every witness extracts a subsequence order-isomorphic to the pattern."""
    if len(result.witnesses) != len(perms):
        return False
    for w, host in zip(result.witnesses, perms):
        if len(w) != result.length:
            return False
        vals = host.as_array()[np.asarray(w.indices, dtype=np.int64) - 1]
        ranks = np.empty(len(vals), dtype=np.int64)
        ranks[np.argsort(vals, kind="stable")] = np.arange(1, len(vals) + 1)
        if tuple(ranks.tolist()) != result.pattern.values:
            return False
    return True


def heuristic_lcp(cloud, config: GridConfig, method: str, rng: np.random.Generator) -> LcpResult:
    grid = build_grid(cloud, config)
    if method == "greedy":
        scat = greedy_scattering(grid, rng)
    elif method == "matching":
        scat = max_scattering(grid)
    else:
        raise ValueError(f"unknown heuristic method {method!r}")
    return pattern_from_scattering(grid, scat, cloud)
