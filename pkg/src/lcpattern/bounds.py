"""Closed-form bounds and constants for the longest common pattern length."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional

import mpmath
import numpy as np


def exponent(m: int) -> float:
    """Growth exponent m / (2m - 1) of the expected LCP length."""
    return m / (2 * m - 1)


def _check_m(m: int) -> None:
    if m < 2:
        raise ValueError("m must be >= 2")


def upper_bound_expectation(n: int, m: int) -> int:
    """ceil(e * n^(m/(2m-1))), evaluated at 50 digits.

    Values within 1e-9 of an integer are snapped before the ceiling.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_m(m)
    with mpmath.workdps(50):
        val = mpmath.e * mpmath.power(n, mpmath.mpf(m) / (2 * m - 1))
        nearest = mpmath.nint(val)
        if abs(val - nearest) < mpmath.mpf("1e-9"):
            return int(nearest)
        return int(mpmath.ceil(val))


def log_factorial(k: int) -> float:
    return math.lgamma(k + 1)


def tail_bound_log(n: int, m: int, k: int) -> float:
    """Natural log of min(1, n^(mk) / (k!)^(2m-1)), an upper bound on P(L >= k)."""
    _check_m(m)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    val = m * k * math.log(n) - (2 * m - 1) * log_factorial(k)
    return min(0.0, val)


def tail_bound(n: int, m: int, k: int) -> float:
    return math.exp(tail_bound_log(n, m, k))


def lower_constant(m: int, c: float) -> float:
    """Asymptotic lower-bound constant c / (1 + c^(2m-1)) for grid scale c."""
    _check_m(m)
    if not c > 0:
        raise ValueError("c must be positive")
    return c / (1 + c ** (2 * m - 1))


def optimal_c(m: int) -> float:
    _check_m(m)
    return (1 / (2 * m - 2)) ** (1 / (2 * m - 1))


@dataclass(frozen=True)
class EulerTrace:
    R: int
    epsilon: float
    steps: np.ndarray

    @property
    def final(self) -> float:
        return float(self.steps[-1])

    @property
    def limit(self) -> float:
        """(1 - eps) / (2 - eps), the R -> infinity value of the final step."""
        return (1 - self.epsilon) / (2 - self.epsilon)

    def ode_solution(self) -> np.ndarray:
        x = np.arange(len(self.steps)) / self.R
        return x / (x + 1)

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.steps - self.ode_solution())))


def euler_trace(R: int, epsilon: float) -> EulerTrace:
    """Iterate y <- y + (1 - y)^2 / R for floor((1 - epsilon) R) steps from 0."""
    if R < 2:
        raise ValueError("R must be >= 2")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    K = math.floor((1 - epsilon) * R)
    steps = np.empty(K + 1)
    y = 0.0
    h = 1.0 / R
    steps[0] = y
    for k in range(1, K + 1):
        y += h * (1 - y) * (1 - y)
        steps[k] = y
    return EulerTrace(R=R, epsilon=epsilon, steps=steps)


def talagrand_t(delta: float) -> float:
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return 2 * math.sqrt(math.log(1 / delta))


def talagrand_interval(b: float, m: int, delta: float) -> tuple[float, float]:
    """Window [b - t sqrt(mb), b + t sqrt(m^2 t^2 + mb)] with exp(-t^2/4) = delta."""
    if b < 1:
        raise ValueError("b must be >= 1")
    _check_m(m)
    t = talagrand_t(delta)
    low = b - t * math.sqrt(m * b)
    high = b + t * math.sqrt(m * m * t * t + m * b)
    return low, high


def mean_median_gap_bound(expectation_estimate: float, m: int) -> float:
    if expectation_estimate < 0:
        raise ValueError("expectation estimate must be non-negative")
    return 40 * math.sqrt(m * expectation_estimate)


@dataclass(frozen=True)
class BoundsReport:
    n: int
    m: int
    upper_expectation: int
    lower_liminf_constant: float
    optimal_c: float
    exponent: float
    grid_scale: float
    tail_k: Optional[int] = None
    tail_bound_log: Optional[float] = None
    tail_bound: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def bounds_report(n: int, m: int, c: float = 1.0, k: Optional[int] = None) -> BoundsReport:
    tl = tail_bound_log(n, m, k) if k is not None else None
    return BoundsReport(
        n=n,
        m=m,
        upper_expectation=upper_bound_expectation(n, m),
        lower_liminf_constant=lower_constant(m, c),
        optimal_c=optimal_c(m),
        exponent=exponent(m),
        grid_scale=c,
        tail_k=k,
        tail_bound_log=tl,
        tail_bound=math.exp(tl) if tl is not None else None,
    )
