"""Exact longest common pattern for small instances."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .perm_core import (
    Permutation,
    Witness,
    common_monotone_length,
    contains_pattern,
    pattern_of,
)

DEFAULT_BUDGET = 10**8


class SizeGuardError(ValueError):
    """Raised when an exact search would exceed its work budget."""


@dataclass(frozen=True)
class LcpResult:
    length: int
    pattern: Permutation
    witnesses: tuple[Witness, ...]


def _check_inputs(perms: Sequence[Permutation]) -> int:
    if len(perms) < 2:
        raise ValueError("need at least two permutations")
    lengths = {len(p) for p in perms}
    if len(lengths) != 1:
        raise ValueError("permutations must have equal length")
    return lengths.pop()


def estimated_work(n: int, m: int) -> int:
    """Worst-case subset tests: sum_k C(n,k) candidates, each checked against
    up to C(n,k) embeddings in each of the other m-1 permutations."""
    return (comb(2 * n, n) - 1) * (m - 1)


def check_budget(n: int, m: int, budget: int = DEFAULT_BUDGET) -> None:
    work = estimated_work(n, m)
    if work > budget:
        raise SizeGuardError(
            f"exact LCP for n={n}, m={m} needs ~{work:.3g} subtests (budget {budget:.3g})"
        )


def _patterns_of_size(perm: Permutation, k: int) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Distinct patterns of length k in ``perm`` -> first index subset inducing it."""
    vals = perm.values
    found: dict[tuple[int, ...], tuple[int, ...]] = {}
    for idx in combinations(range(len(vals)), k):
        key = pattern_of([vals[i] for i in idx]).values
        if key not in found:
            found[key] = idx
    return found


def lcp_exact(perms: Sequence[Permutation], budget: int = DEFAULT_BUDGET) -> LcpResult:
    """Longest common pattern by subset enumeration of the first permutation.

    Lengths are tried from n downwards, never below the common monotone
    length (which is always attained).  Among the patterns of the first
    feasible length, the lexicographically smallest one is returned.
    """
    n = _check_inputs(perms)
    check_budget(n, len(perms), budget)
    first = perms[0]
    floor_k = common_monotone_length(perms)
    for k in range(n, floor_k - 1, -1):
        for key in sorted(_patterns_of_size(first, k)):
            sigma = Permutation(key)
            witnesses = []
            for host in perms:
                w = contains_pattern(host, sigma)
                if w is None:
                    break
                witnesses.append(w)
            else:
                return LcpResult(k, sigma, tuple(witnesses))
    raise AssertionError("monotone lower bound not attained")  # pragma: no cover


def _pattern_set(perm: Sequence[int], k: int) -> set[tuple[int, ...]]:
    out = set()
    for sub in combinations(perm, k):
        srt = sorted(sub)
        out.add(tuple(srt.index(v) + 1 for v in sub))
    return out


def lcp_exact_crosscheck(perms: Sequence[Permutation]) -> int:
    """LCP length from the pattern sets of the last permutation down.

    Shares no search code with :func:`lcp_exact`; containment is decided by
    set intersection of the full pattern sets at each length.
    """
    n = _check_inputs(perms)
    raw = [p.values for p in perms]
    for k in range(n, 0, -1):
        common = _pattern_set(raw[-1], k)
        for other in raw[:-1]:
            common &= _pattern_set(other, k)
            if not common:
                break
        if common:
            return k
    raise AssertionError("singleton pattern always common")  # pragma: no cover
