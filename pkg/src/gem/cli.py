"""Command-line entry point: ``gem run | list-problems | list-presets | reproduce-tables``."""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from typing import Dict, List, Optional

from .engine import EPSILON_KINDS
from .errors import ConfigurationError, GemError
from .presets import get_preset, list_presets, registry_to_json
from .problems import problem_catalog
from .runner import ExperimentConfig, fmt, reproduce_tables, run_experiment

EXIT_OK = 0
EXIT_RUN_ERROR = 1
EXIT_CONFIG_ERROR = 2
SEED_ENV = "GEM_SEED"


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so every config error maps to one code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigurationError(f"{self.prog}: {message}")


def parse_params(text: str) -> Dict[str, str]:
    """``"a=1,b=0.7,theta=0.97^t"`` -> ``{"a": "1", "b": "0.7", "theta": "0.97^t"}``."""
    out: Dict[str, str] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise ConfigurationError(f"malformed parameter {item!r}; expected key=value")
        out[key.strip()] = value.strip()
    if not out:
        raise ConfigurationError("--params needs at least one key=value pair")
    return out


def resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None or not env.strip():
        return 0
    try:
        return int(env)
    except ValueError:
        raise ConfigurationError(f"{SEED_ENV}={env!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gem", description="Generalized evolutionary metaheuristic experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="repeated seeded runs on one problem")
    run.add_argument("--problem", required=True)
    group = run.add_mutually_exclusive_group()
    group.add_argument("--preset", default="GEM", help="registered preset name (default: GEM)")
    group.add_argument("--params", type=parse_params, help="coefficients as k=v,..., e.g. b=0.5,theta=0.9^t")
    run.add_argument("--runs", type=int, default=20)
    run.add_argument("--pop", type=int, default=10, help="population size n")
    run.add_argument("--iters", type=int, default=1000, help="iterations t_max")
    run.add_argument("--seed", type=int, default=None, help=f"master seed (falls back to ${SEED_ENV}, then 0)")
    run.add_argument("--out", default=None, help="directory for summary.csv and run files")
    run.add_argument("--dim", type=int, default=None)
    run.add_argument("--lambda", dest="penalty_lambda", type=float, default=None, help="penalty coefficient")
    run.add_argument("--m", type=int, default=None, help="number of best agents in the centroid")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--evaluate-centroid", action="store_true", help="let the centroid compete for the global best")
    run.add_argument("--epsilon", choices=EPSILON_KINDS, default="normal")

    sub.add_parser("list-problems", help="registered problems")
    lp = sub.add_parser("list-presets", help="registered presets")
    lp.add_argument("--json", action="store_true", help="full parameter mappings as JSON")

    rt = sub.add_parser("reproduce-tables", help="all functions and case studies with default settings")
    rt.add_argument("--out", required=True)
    rt.add_argument("--seed", type=int, default=None)
    rt.add_argument("--runs", type=int, default=20)
    rt.add_argument("--iters", type=int, default=1000)
    rt.add_argument("--workers", type=int, default=1)
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        problem=args.problem,
        preset=args.preset,
        params=args.params or {},
        n=args.pop,
        t_max=args.iters,
        runs=args.runs,
        master_seed=resolve_seed(args.seed),
        dimension=args.dim,
        penalty_lambda=args.penalty_lambda,
        m=args.m,
        evaluate_centroid=args.evaluate_centroid,
        epsilon=args.epsilon,
        out_dir=args.out,
        workers=args.workers,
    ).validate()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        records, stats = run_experiment(config)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    best = min((r for r in records if r.ok), key=lambda r: r.best_value)
    print(f"problem={config.problem} preset={config.preset_label} runs={config.runs} seed={config.master_seed}")
    print(f"best={fmt(stats.best)} worst={fmt(stats.worst)} mean={fmt(stats.mean)} sd={fmt(stats.sd)}")
    print("best point: " + " ".join(fmt(v) for v in best.best_point))
    if stats.failed:
        print(f"failed runs: {stats.failed}")
    if config.out_dir:
        print(f"results written to {config.out_dir}")
    return EXIT_OK


def _cmd_list_problems(_: argparse.Namespace) -> int:
    for name, desc, dim in problem_catalog():
        print(f"{name:<16} D={dim:<3} {desc}")
    return EXIT_OK


def _cmd_list_presets(args: argparse.Namespace) -> int:
    if args.json:
        sys.stdout.write(registry_to_json())
        return EXIT_OK
    for name in ["GEM"] + list_presets():
        spec = get_preset(name)
        print(f"{spec.name:<6} {spec.fidelity:<12} {spec.title}")
    return EXIT_OK


def _cmd_reproduce(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        results = reproduce_tables(args.out, master_seed=seed, runs=args.runs, t_max=args.iters, workers=args.workers)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    for name, s in results.items():
        print(f"{name:<16} best={fmt(s.best):<18} worst={fmt(s.worst):<18} mean={fmt(s.mean)}")
    print(f"tables written to {args.out}")
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "list-problems": _cmd_list_problems,
    "list-presets": _cmd_list_presets,
    "reproduce-tables": _cmd_reproduce,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (GemError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUN_ERROR


if __name__ == "__main__":
    sys.exit(main())
