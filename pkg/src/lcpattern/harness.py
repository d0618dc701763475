"""Reproducible Monte Carlo experiments over random permutation tuples."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence, Union

import numpy as np
from scipy import stats

from . import bounds
from .grid_scattering import GridConfig, heuristic_lcp, induced_permutations, random_cloud, verify_result
from .lcp_exact import DEFAULT_BUDGET, check_budget, lcp_exact
from .perm_core import longest_decreasing, longest_increasing

METHODS = ("exact", "greedy", "matching", "monotone")
CSV_HEADER = ["n", "m", "trial", "seed", "method", "length", "grid_side", "runtime_ms"]


class VerificationError(RuntimeError):
    """A heuristic produced a pattern whose witnesses do not check out."""


@dataclass
class ExperimentConfig:
    n_values: list[int]
    m: int = 2
    trials: int = 20
    base_seed: int = 0
    method: str = "matching"
    grid_scale: Union[float, str] = 1.0
    epsilon: float = 0.1
    output_format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        self.n_values = [int(n) for n in self.n_values]
        if not self.n_values or min(self.n_values) < 1:
            raise ValueError("n_values must be non-empty positive integers")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.m < 2:
            raise ValueError("m must be >= 2")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.grid_scale != "auto":
            self.grid_scale = float(self.grid_scale)
            if not self.grid_scale > 0:
                raise ValueError("grid scale must be positive or 'auto'")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output format must be csv or json")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def scale_for(self, m: int) -> float:
        return bounds.optimal_c(m) if self.grid_scale == "auto" else float(self.grid_scale)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class TrialRecord:
    n: int
    m: int
    trial: int
    seed: int
    method: str
    length: int
    grid_side: int
    runtime_ms: float


def derive_seed(base_seed: int, n: int, trial_index: int) -> int:
    """64-bit seed from BLAKE2b over the decimal triple ``base:n:trial``.

    Stable across releases; do not change the encoding.
    """
    msg = f"{int(base_seed)}:{int(n)}:{int(trial_index)}".encode()
    return int.from_bytes(hashlib.blake2b(msg, digest_size=8).digest(), "little")


def _monotone_length(perms) -> int:
    inc = [longest_increasing(p) for p in perms]
    dec = [longest_decreasing(p) for p in perms]
    k_inc = min(k for k, _ in inc)
    k_dec = min(k for k, _ in dec)
    k, chosen, sign = (k_inc, inc, 1) if k_inc >= k_dec else (k_dec, dec, -1)
    for perm, (_, w) in zip(perms, chosen):
        vals = [sign * v for v in w.extract(perm)[:k]]
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise VerificationError("monotone witness is not monotone")
    return k


def run_trial(
    n: int,
    m: int,
    method: str,
    seed: int,
    c: float = 1.0,
    trial: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> TrialRecord:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "exact":
        check_budget(n, m, budget)
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    cloud = random_cloud(n, m, rng)
    side = 0
    if method == "exact":
        length = lcp_exact(induced_permutations(cloud), budget=budget).length
    elif method == "monotone":
        length = _monotone_length(induced_permutations(cloud))
    else:
        config = GridConfig(n=n, m=m, c=c)
        side = config.side
        result = heuristic_lcp(cloud, config, method, rng)
        if not verify_result(result, induced_permutations(cloud)):
            raise VerificationError(f"witness check failed (n={n}, seed={seed})")
        length = result.length
    elapsed = (time.perf_counter() - start) * 1000.0
    return TrialRecord(n, m, trial, seed, method, length, side, elapsed)


def _run_task(args) -> TrialRecord:
    n, m, method, seed, c, trial = args
    return run_trial(n, m, method, seed, c, trial)


def trial_tasks(config: ExperimentConfig, m: Optional[int] = None, n_values=None) -> list[tuple]:
    m = config.m if m is None else m
    c = config.scale_for(m)
    return [
        (n, m, config.method, derive_seed(config.base_seed, n, t), c, t)
        for n in (config.n_values if n_values is None else n_values)
        for t in range(config.trials)
    ]


def run_tasks(tasks: Sequence[tuple], workers: int = 1) -> list[TrialRecord]:
    if workers == 1 or len(tasks) <= 1:
        records = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return sorted(records, key=lambda r: (r.m, r.n, r.trial))


@dataclass(frozen=True)
class NSummary:
    n: int
    trials: int
    mean: float
    std: float
    median: float
    min: int
    max: int
    normalized_mean: float
    grid_side: int
    euler_prediction: Optional[float] = None


@dataclass(frozen=True)
class SummaryStats:
    m: int
    method: str
    per_n: list[NSummary]
    fitted_exponent: Optional[float] = None
    exponent_stderr: Optional[float] = None
    target_exponent: float = field(default=0.0)

    def to_dict(self) -> dict:
        return asdict(self)


def summarize(records: Sequence[TrialRecord], epsilon: float = 0.1) -> SummaryStats:
    """Per-n moments plus an OLS fit of ln(mean) on ln(n)."""
    if not records:
        raise ValueError("no records to summarize")
    m = records[0].m
    method = records[0].method
    by_n: dict[int, list[TrialRecord]] = {}
    for rec in records:
        by_n.setdefault(rec.n, []).append(rec)
    per_n = []
    for n in sorted(by_n):
        lengths = np.array([r.length for r in by_n[n]], dtype=float)
        side = by_n[n][0].grid_side
        pred = None
        if method == "greedy" and side >= 2:
            # Greedy fraction of the side predicted by the Euler recurrence.
            pred = bounds.euler_trace(side, epsilon).final
        per_n.append(
            NSummary(
                n=n,
                trials=len(lengths),
                mean=float(lengths.mean()),
                std=float(lengths.std(ddof=1)) if len(lengths) > 1 else 0.0,
                median=float(np.median(lengths)),
                min=int(lengths.min()),
                max=int(lengths.max()),
                normalized_mean=float(lengths.mean() / n ** bounds.exponent(m)),
                grid_side=side,
                euler_prediction=pred,
            )
        )
    slope = stderr = None
    if len(per_n) >= 2:
        x = np.log([s.n for s in per_n])
        y = np.log([s.mean for s in per_n])
        fit = stats.linregress(x, y)
        slope = float(fit.slope)
        stderr = float(fit.stderr) if len(per_n) >= 3 else None
    return SummaryStats(m, method, per_n, slope, stderr, bounds.exponent(m))


def monte_carlo(config: ExperimentConfig) -> tuple[list[TrialRecord], SummaryStats]:
    records = run_tasks(trial_tasks(config), config.workers)
    return records, summarize(records, config.epsilon)


def records_to_csv(records: Sequence[TrialRecord], include_runtime: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = CSV_HEADER if include_runtime else CSV_HEADER[:-1]
    writer.writerow(header)
    for r in records:
        row = [r.n, r.m, r.trial, r.seed, r.method, r.length, r.grid_side]
        if include_runtime:
            row.append(repr(float(r.runtime_ms)))
        writer.writerow(row)
    return buf.getvalue()


def records_to_json(records: Sequence[TrialRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=1) + "\n"


def records_from_csv(text: str) -> list[TrialRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [
        TrialRecord(
            n=int(row["n"]),
            m=int(row["m"]),
            trial=int(row["trial"]),
            seed=int(row["seed"]),
            method=row["method"],
            length=int(row["length"]),
            grid_side=int(row["grid_side"]),
            runtime_ms=float(row["runtime_ms"]),
        )
        for row in reader
    ]


@dataclass(frozen=True)
class ConcentrationRow:
    n: int
    mean: float
    std: float
    median: float
    ratio: float
    mean_median_gap: float
    gap_bound: float


def concentration_experiment(config: ExperimentConfig, ratio_limit: float = 2.0) -> dict:
    """Spread of the realized lengths relative to sqrt(m * mean), per n."""
    if config.method == "exact":
        raise ValueError("concentration study needs a heuristic method")
    records, summary = monte_carlo(config)
    rows = []
    for s in summary.per_n:
        rows.append(
            ConcentrationRow(
                n=s.n,
                mean=s.mean,
                std=s.std,
                median=s.median,
                ratio=s.std / math.sqrt(config.m * s.mean),
                mean_median_gap=abs(s.mean - s.median),
                gap_bound=bounds.mean_median_gap_bound(s.mean, config.m),
            )
        )
    return {
        "m": config.m,
        "method": config.method,
        "ratio_limit": ratio_limit,
        "bounded": all(r.ratio <= ratio_limit for r in rows),
        "gaps_within_bound": all(r.mean_median_gap <= r.gap_bound for r in rows),
        "rows": [asdict(r) for r in rows],
    }


def limit_constant_probe(config: ExperimentConfig, m_values: Sequence[int]) -> dict:
    """Normalized mean length per m at the largest configured n.  Descriptive only."""
    if config.method == "exact":
        raise ValueError("limit probe needs a heuristic method")
    ms = list(m_values)
    if ms != sorted(ms) or not ms:
        raise ValueError("m values must be given in ascending order")
    n = max(config.n_values)
    rows = []
    for m in ms:
        records = run_tasks(trial_tasks(config, m=m, n_values=[n]), config.workers)
        s = summarize(records, config.epsilon).per_n[0]
        rows.append(
            {
                "m": m,
                "n": n,
                "trials": s.trials,
                "mean": s.mean,
                "normalized_mean": s.normalized_mean,
                "grid_side": s.grid_side,
                "grid_scale": config.scale_for(m),
                "upper_envelope": bounds.upper_bound_expectation(n, m) / n ** bounds.exponent(m),
            }
        )
    return {"method": config.method, "conjectured_limit": 2.0, "rows": rows}
