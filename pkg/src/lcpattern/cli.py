"""Command line interface: ``lcpattern <subcommand> ...``.

Exit codes: 0 success, 2 invalid arguments, 3 size-guard refusal.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds, harness
from .grid_scattering import GridConfig, random_cloud
from .lcp_exact import SizeGuardError, lcp_exact
from .perm_core import (
    Permutation,
    common_monotone_length,
    contains_pattern,
    permutation_from_points,
    random_permutation,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARD = 3


def _grid_scale(text: str):
    if text == "auto":
        return "auto"
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid scale must be a number or 'auto', got {text!r}")
    if not val > 0:
        raise argparse.ArgumentTypeError("grid scale must be positive")
    return val


def _experiment_parser(sub, name: str, help_text: str, multi_m: bool = False):
    p = sub.add_parser(name, help=help_text)
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--n", type=int, nargs="+", dest="n_values")
    if multi_m:
        p.add_argument("--m", type=int, nargs="+", dest="m_values")
    else:
        p.add_argument("--m", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, dest="base_seed")
    p.add_argument("--method", choices=harness.METHODS)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--grid-scale", type=_grid_scale, dest="grid_scale")
    p.add_argument("--format", choices=("csv", "json"), dest="output_format")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--workers", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcpattern", description="Longest common patterns of random permutations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("contains", help="test whether HOST contains PATTERN")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("lcp", help="longest common pattern of the given permutations")
    p.add_argument("perms", nargs="+")
    p.add_argument("--method", choices=("exact", "monotone"), default="exact")
    p.add_argument("--budget", type=float, default=1e8)

    p = sub.add_parser("gen", help="generate random permutations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--geometric", action="store_true", help="induce from uniform points in the unit square")

    p = sub.add_parser("bounds", help="closed-form bounds as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--grid-scale", type=_grid_scale, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.1)

    _experiment_parser(sub, "simulate", "Monte Carlo trials, one record per trial")
    _experiment_parser(sub, "scaling", "per-n summary and fitted growth exponent")
    _experiment_parser(sub, "concentration", "spread of lengths against sqrt(m * mean)")
    _experiment_parser(sub, "limit-probe", "normalized means across m", multi_m=True)
    return parser


def _load_config(args) -> harness.ExperimentConfig:
    data: dict = {}
    if args.config:
        with open(args.config) as fh:
            data.update(json.load(fh))
    for key in ("n_values", "m", "trials", "base_seed", "method", "epsilon", "grid_scale", "output_format", "workers"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    if getattr(args, "m_values", None):
        data["m"] = args.m_values[0]
    if args.command == "limit-probe":
        data.setdefault("m", 2)
    if "n_values" not in data:
        raise ValueError("--n is required (or n_values in --config)")
    return harness.ExperimentConfig.from_dict(data)


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_contains(args) -> int:
    host = Permutation.parse(args.host)
    pattern = Permutation.parse(args.pattern)
    w = contains_pattern(host, pattern)
    if args.format == "json":
        print(json.dumps({"contained": w is not None, "witness": list(w.indices) if w else None}))
    elif w is None:
        print("none")
    else:
        print("witness: " + " ".join(map(str, w.indices)))
        print("values:  " + " ".join(map(str, w.extract(host))))
    return EXIT_OK


def _cmd_lcp(args) -> int:
    perms = [Permutation.parse(t) for t in args.perms]
    if args.method == "monotone":
        print(json.dumps({"length": common_monotone_length(perms)}))
        return EXIT_OK
    res = lcp_exact(perms, budget=int(args.budget))
    print(
        json.dumps(
            {
                "length": res.length,
                "pattern": str(res.pattern),
                "witnesses": [list(w.indices) for w in res.witnesses],
            }
        )
    )
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.n < 1 or args.m < 1:
        raise ValueError("--n and --m must be >= 1")
    rng = np.random.default_rng(args.seed)
    if args.geometric:
        cloud = random_cloud(args.n, args.m, rng)
        perms = [permutation_from_points(row) for row in cloud]
    else:
        perms = [random_permutation(args.n, rng) for _ in range(args.m)]
    for p in perms:
        print(p)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    c = bounds.optimal_c(args.m) if args.grid_scale == "auto" else args.grid_scale
    report = bounds.bounds_report(args.n, args.m, c=c, k=args.k).to_dict()
    side = GridConfig(n=args.n, m=args.m, c=c).side
    if side >= 2:
        trace = bounds.euler_trace(side, args.epsilon)
        report["euler_final"] = trace.final
        report["euler_limit"] = trace.limit
    print(json.dumps(report, indent=1))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    config = _load_config(args)
    records, summary = harness.monte_carlo(config)
    if config.output_format == "csv":
        _emit(harness.records_to_csv(records), args.out)
    else:
        _emit(harness.records_to_json(records), args.out)
    if args.out:
        print(json.dumps(summary.to_dict(), indent=1))
    return EXIT_OK


def _cmd_scaling(args) -> int:
    config = _load_config(args)
    _, summary = harness.monte_carlo(config)
    if config.output_format == "json":
        _emit(json.dumps(summary.to_dict(), indent=1) + "\n", args.out)
    else:
        lines = ["n,trials,mean,std,median,min,max,normalized_mean,grid_side"]
        for s in summary.per_n:
            lines.append(
                ",".join(
                    map(str, (s.n, s.trials, repr(s.mean), repr(s.std), repr(s.median), s.min, s.max, repr(s.normalized_mean), s.grid_side))
                )
            )
        lines.append(f"# fitted_exponent={summary.fitted_exponent!r} stderr={summary.exponent_stderr!r} target={summary.target_exponent!r}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _rows_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    keys = list(rows[0])
    lines = [",".join(keys)]
    for r in rows:
        lines.append(",".join(repr(r[k]) if isinstance(r[k], float) else str(r[k]) for k in keys))
    return "\n".join(lines) + "\n"


def _cmd_concentration(args) -> int:
    config = _load_config(args)
    report = harness.concentration_experiment(config)
    if config.output_format == "json":
        _emit(json.dumps(report, indent=1) + "\n", args.out)
    else:
        _emit(_rows_csv(report["rows"]) + f"# bounded={report['bounded']} gaps_within_bound={report['gaps_within_bound']}\n", args.out)
    return EXIT_OK


def _cmd_limit_probe(args) -> int:
    config = _load_config(args)
    m_values = args.m_values or [config.m]
    report = harness.limit_constant_probe(config, m_values)
    if config.output_format == "json":
        _emit(json.dumps(report, indent=1) + "\n", args.out)
    else:
        _emit(_rows_csv(report["rows"]), args.out)
    return EXIT_OK


COMMANDS = {
    "contains": _cmd_contains,
    "lcp": _cmd_lcp,
    "gen": _cmd_gen,
    "bounds": _cmd_bounds,
    "simulate": _cmd_simulate,
    "scaling": _cmd_scaling,
    "concentration": _cmd_concentration,
    "limit-probe": _cmd_limit_probe,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
