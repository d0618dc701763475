"""Longest common patterns of random permutations: exact search, grid
scattering lower bounds, closed-form bounds and Monte Carlo experiments."""

from .perm_core import (
    Permutation,
    Point,
    Witness,
    common_monotone_length,
    contains_pattern,
    from_one_line,
    longest_decreasing,
    longest_increasing,
    pattern_of,
    permutation_from_points,
    random_permutation,
)
from .lcp_exact import LcpResult, SizeGuardError, lcp_exact, lcp_exact_crosscheck
from .grid_scattering import (
    Grid,
    GridConfig,
    Scattering,
    build_grid,
    greedy_scattering,
    heuristic_lcp,
    max_scattering,
    pattern_from_scattering,
)

__version__ = "0.1.0"
