"""Permutations, random generation, pattern containment and monotone baselines.

Permutations are stored in one-line notation with values ``1..n``.  Witness
indices are 1-based positions into the host permutation.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Permutation:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        n = len(vals)
        if n == 0:
            raise ValueError("permutation must be non-empty")
        seen = bytearray(n + 1)
        for v in vals:
            if v < 1 or v > n:
                raise ValueError(f"value {v} out of range 1..{n}")
            if seen[v]:
                raise ValueError(f"duplicate value {v}")
            seen[v] = 1

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __str__(self) -> str:
        return " ".join(map(str, self.values))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse space-separated one-line notation.

        A single token of digits (``"153642"``) is read digit by digit, which
        is unambiguous for n <= 9.
        """
        tokens = text.replace(",", " ").split()
        if len(tokens) == 1 and len(tokens[0]) > 1:
            tokens = list(tokens[0])
        try:
            return cls(tuple(int(t) for t in tokens))
        except ValueError as exc:
            raise ValueError(f"cannot parse permutation {text!r}: {exc}") from None

    def reverse(self) -> "Permutation":
        return Permutation(self.values[::-1])

    def complement(self) -> "Permutation":
        n = len(self.values)
        return Permutation(tuple(n + 1 - v for v in self.values))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.values)
        for i, v in enumerate(self.values, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)


@dataclass(frozen=True)
class Witness:
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("witness indices must be strictly increasing")
        if idx and idx[0] < 1:
            raise ValueError("witness indices are 1-based")

    def __len__(self) -> int:
        return len(self.indices)

    def extract(self, host: Permutation) -> list[int]:
        return [host.values[i - 1] for i in self.indices]


def from_one_line(values: Iterable[int]) -> Permutation:
    return Permutation(tuple(values))


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    if n < 1:
        raise ValueError("n must be >= 1")
    return Permutation(tuple((rng.permutation(n) + 1).tolist()))


def _ranks(keys: np.ndarray) -> np.ndarray:
    """0-based ranks of ``keys``, ties broken by original index."""
    order = np.lexsort((np.arange(len(keys)), keys))
    ranks = np.empty(len(keys), dtype=np.int64)
    ranks[order] = np.arange(len(keys))
    return ranks


def point_ranks(points) -> tuple[np.ndarray, np.ndarray]:
    """Return (x_rank, y_rank) per point, both 0-based."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return _ranks(pts[:, 0]), _ranks(pts[:, 1])


def permutation_from_points(points) -> Permutation:
    """Permutation sending i to j when the point with the i-th smallest x has
    the j-th smallest y.  ``points`` is a sequence of Points or an (n, 2) array.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("need at least one point")
    xr, yr = point_ranks(pts)
    values = np.empty(len(pts), dtype=np.int64)
    values[xr] = yr + 1
    return Permutation(tuple(values.tolist()))


def random_points(n: int, rng: np.random.Generator) -> np.ndarray:
    """n uniform points in [0, 1)^2 as an (n, 2) array."""
    return rng.random((n, 2))


def pattern_of(values: Sequence[float]) -> Permutation:
    vals = list(values)
    if len(set(vals)) != len(vals):
        raise ValueError("pattern_of needs pairwise distinct values")
    order = sorted(range(len(vals)), key=vals.__getitem__)
    out = [0] * len(vals)
    for rank, i in enumerate(order, start=1):
        out[i] = rank
    return Permutation(tuple(out))


_COUNT_TABLE_MAX_N = 1000


def _suffix_counts(h: Sequence[int]) -> list[list[int]]:
    """table[pos][v] = number of positions >= pos holding a value <= v."""
    n = len(h)
    table = [[0] * (n + 2) for _ in range(n + 1)]
    for pos in range(n - 1, -1, -1):
        row = table[pos]
        row[:] = table[pos + 1]
        for v in range(h[pos], n + 2):
            row[v] += 1
    return table


def contains_pattern(host: Permutation, pattern: Permutation) -> Optional[Witness]:
    """Find the lexicographically smallest embedding of ``pattern`` in ``host``.

    Depth-first over pattern positions, trying host indices left to right.
    Entry p must land strictly between the host values of the placed entries
    whose pattern values bracket ``pattern[p]``.  After each placement every
    value gap between placed entries must still have enough host entries to
    its right for the unplaced pattern values inside it; this count check is
    exact for hosts up to ``_COUNT_TABLE_MAX_N`` and falls back to comparing
    value distances beyond that.
    """
    h = host.values
    s = pattern.values
    n, k = len(h), len(s)
    if k > n:
        return None

    # below[p]/above[p]: earlier positions holding the nearest pattern values
    # under and over s[p].  gaps[p]: after placing 0..p, the (lower position,
    # upper position, unplaced count) of each gap between consecutive placed
    # values, -1 standing for the 0 / n+1 sentinels.
    below = [-1] * k
    above = [-1] * k
    gaps: list[list[tuple[int, int, int]]] = []
    for p in range(k):
        lo_v, hi_v = 0, k + 1
        for q in range(p):
            if lo_v < s[q] < s[p]:
                lo_v, below[p] = s[q], q
            elif s[p] < s[q] < hi_v:
                hi_v, above[p] = s[q], q
        placed = sorted(range(p + 1), key=s.__getitem__)
        chain = [(-1, 0)] + [(q, s[q]) for q in placed] + [(-1, k + 1)]
        gaps.append(
            [(qa, qb, vb - va - 1) for (qa, va), (qb, vb) in zip(chain, chain[1:]) if vb - va > 1]
        )

    table = _suffix_counts(h) if n <= _COUNT_TABLE_MAX_N else None
    # A partial embedding's future depends only on the last index used and
    # the host values bounding gaps that still hold unplaced entries, so
    # exhausted states are remembered and skipped.
    dead: set[tuple] = set()
    keys: list[tuple] = [()] * k
    chosen = [0] * k
    cursor = [0] * k
    p = 0
    while True:
        lo = h[chosen[below[p]]] if below[p] >= 0 else 0
        hi = h[chosen[above[p]]] if above[p] >= 0 else n + 1
        last = n - (k - p)
        i = cursor[p]
        while i <= last:
            v = h[i]
            if lo < v < hi:
                chosen[p] = i
                ok = True
                row = table[i + 1] if table is not None else None
                state = [p, i]
                for qa, qb, need in gaps[p]:
                    ha = h[chosen[qa]] if qa >= 0 else 0
                    hb = h[chosen[qb]] if qb >= 0 else n + 1
                    room = row[hb - 1] - row[ha] if row is not None else hb - ha - 1
                    if room < need:
                        ok = False
                        break
                    state.append(ha)
                    state.append(hb)
                if ok:
                    key = tuple(state)
                    if key not in dead:
                        keys[p] = key
                        break
            i += 1
        if i <= last:
            cursor[p] = i + 1
            if p == k - 1:
                return Witness(tuple(c + 1 for c in chosen))
            p += 1
            cursor[p] = i + 1
        else:
            p -= 1
            if p < 0:
                return None
            dead.add(keys[p])


def is_witness(host: Permutation, pattern: Permutation, witness: Witness) -> bool:
    if len(witness) != len(pattern):
        return False
    if witness.indices and witness.indices[-1] > len(host):
        return False
    return pattern_of(witness.extract(host)) == pattern


def longest_increasing(perm: Permutation) -> tuple[int, Witness]:
    """Patience sorting with back-pointers; returns (length, witness)."""
    vals = perm.values
    tails: list[int] = []
    tail_idx: list[int] = []
    prev = [-1] * len(vals)
    for i, v in enumerate(vals):
        pos = bisect_left(tails, v)
        if pos == len(tails):
            tails.append(v)
            tail_idx.append(i)
        else:
            tails[pos] = v
            tail_idx[pos] = i
        prev[i] = tail_idx[pos - 1] if pos else -1
    out = []
    i = tail_idx[-1]
    while i >= 0:
        out.append(i + 1)
        i = prev[i]
    return len(tails), Witness(tuple(reversed(out)))


def longest_decreasing(perm: Permutation) -> tuple[int, Witness]:
    return longest_increasing(perm.complement())


def common_monotone_length(perms: Sequence[Permutation]) -> int:
    """max(min LIS, min LDS) over ``perms``; a lower bound on the LCP length."""
    if not perms:
        raise ValueError("need at least one permutation")
    if len({len(p) for p in perms}) != 1:
        raise ValueError("permutations must have equal length")
    inc = min(longest_increasing(p)[0] for p in perms)
    dec = min(longest_decreasing(p)[0] for p in perms)
    return max(inc, dec)
