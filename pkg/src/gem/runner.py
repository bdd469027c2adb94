"""Repeated seeded runs, summary statistics and file export."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .engine import EPSILON_KINDS, DEFAULT_EPSILON, RunRecord, derive_seed, run_gem
from .errors import ConfigurationError, EvaluationError
from .presets import PresetSpec, custom_preset, get_preset
from .problems import canonical_name, get_problem, reference_value

SUMMARY_HEADER = ("problem", "preset", "runs", "n", "t_max", "best", "worst", "mean", "sd", "seed")
SIGNIFICANT_DIGITS = 10
DEFAULT_SUCCESS_TOLERANCE = 1e-6


def fmt(value: float) -> str:
    """Number formatted with 10 significant digits."""
    return format(float(value), f".{SIGNIFICANT_DIGITS}g")


def _rounded(value: float) -> Optional[float]:
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(fmt(value))


@dataclass
class ExperimentConfig:
    """Everything needed to regenerate an experiment.

    ``params`` maps coefficient names to values such as ``"0.5"`` or
    ``"0.97^t"``; when non-empty it replaces coefficients of the default
    settings and ``preset`` is ignored.
    """

    problem: str
    preset: str = "GEM"
    params: Dict[str, str] = field(default_factory=dict)
    n: int = 10
    t_max: int = 1000
    runs: int = 20
    master_seed: int = 0
    dimension: Optional[int] = None
    penalty_lambda: Optional[float] = None
    m: Optional[int] = None
    evaluate_centroid: bool = False
    epsilon: str = DEFAULT_EPSILON
    out_dir: Optional[str] = None
    workers: int = 1

    def validate(self) -> "ExperimentConfig":
        for name in ("n", "t_max", "runs", "workers"):
            if int(getattr(self, name)) < 1:
                raise ConfigurationError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.master_seed < 0:
            raise ConfigurationError("master seed must be non-negative")
        if self.m is not None and not 1 <= self.m <= self.n:
            raise ConfigurationError(f"m must lie in [1, n={self.n}], got {self.m}")
        if self.epsilon not in EPSILON_KINDS:
            raise ConfigurationError(f"epsilon must be one of {EPSILON_KINDS}")
        self.build_problem()
        self.build_preset()
        return self

    def build_problem(self) -> Any:
        return get_problem(self.problem, self.dimension, self.penalty_lambda)

    def build_preset(self) -> PresetSpec:
        if self.params:
            return custom_preset(self.params)
        return get_preset(self.preset)

    @property
    def preset_label(self) -> str:
        if self.params:
            return "custom(" + ";".join(f"{k}={v}" for k, v in self.params.items()) + ")"
        return self.build_preset().name

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**{k: (dict(v) if k == "params" else v) for k, v in data.items()})


@dataclass(frozen=True)
class SummaryStats:
    best: float
    worst: float
    mean: float
    sd: float
    count: int
    failed: int = 0
    success_count: Optional[int] = None


def summarize(
    records: Sequence[RunRecord],
    target: Optional[float] = None,
    tolerance: float = DEFAULT_SUCCESS_TOLERANCE,
) -> SummaryStats:
    """Statistics of per-run best values over the successful runs.

    ``sd`` is the sample standard deviation (0 for a single run).  A run
    counts as a success when its best value is within ``tolerance`` of
    ``target`` or below it.
    """
    ok = [r for r in records if r.ok]
    if not ok:
        raise EvaluationError("no successful runs to summarize")
    values = np.array([r.best_value for r in ok], dtype=float)
    best, worst = float(values.min()), float(values.max())
    # rounding in the sum can push the mean a hair outside [best, worst]
    mean = float(np.clip(values.mean(), best, worst))
    sd = float(values.std(ddof=1)) if values.size > 1 else 0.0
    success = None
    if target is not None:
        success = int(np.sum(values - target <= tolerance))
    return SummaryStats(best, worst, mean, sd, len(ok), len(records) - len(ok), success)


def run_single(config: ExperimentConfig, run_index: int) -> RunRecord:
    """One seeded run; a numerical failure is returned as a failed record."""
    seed = derive_seed(config.master_seed, run_index)
    problem = config.build_problem()
    try:
        record = run_gem(
            problem,
            config.build_preset(),
            n=config.n,
            t_max=config.t_max,
            rng=seed,
            m=config.m,
            evaluate_centroid=config.evaluate_centroid,
            epsilon=config.epsilon,
        )
    except EvaluationError as exc:
        return RunRecord(
            best_value=float("nan"),
            best_point=np.empty(0),
            history=np.empty(0),
            iterations=0,
            evaluations=0,
            seed=seed,
            run=run_index,
            error=str(exc),
        )
    record.seed = seed
    record.run = run_index
    return record


def _run_star(args: Tuple[ExperimentConfig, int]) -> RunRecord:
    return run_single(*args)


def execute_runs(config: ExperimentConfig) -> List[RunRecord]:
    jobs = [(config, i) for i in range(config.runs)]
    if config.workers > 1 and config.runs > 1:
        with ProcessPoolExecutor(max_workers=min(config.workers, config.runs)) as pool:
            records = list(pool.map(_run_star, jobs))
    else:
        records = [_run_star(job) for job in jobs]
    return sorted(records, key=lambda r: r.run)


def run_experiment(
    config: ExperimentConfig,
    target: Optional[float] = None,
    tolerance: float = DEFAULT_SUCCESS_TOLERANCE,
) -> Tuple[List[RunRecord], SummaryStats]:
    """Run ``config.runs`` seeded repetitions and summarize them.

    Seeds come from :func:`~gem.engine.derive_seed`.  Failed runs are kept in
    the returned list, left out of the statistics and reported with a
    warning.  Results are written to ``config.out_dir`` when it is set.
    ``target`` defaults to the problem's known or best-known minimum.
    """
    config.validate()
    records = execute_runs(config)
    failed = [r for r in records if not r.ok]
    if failed:
        warnings.warn(
            f"{len(failed)} of {len(records)} runs failed and are excluded: "
            + "; ".join(f"run {r.run}: {r.error}" for r in failed),
            RuntimeWarning,
            stacklevel=2,
        )
    if target is None:
        target = reference_value(config.build_problem())
    stats = summarize(records, target, tolerance)
    if config.out_dir is not None:
        export_results(records, stats, config, config.out_dir)
    return records, stats


def summary_row(config: ExperimentConfig, stats: SummaryStats) -> List[str]:
    return [
        canonical_name(config.problem),
        config.preset_label,
        str(config.runs),
        str(config.n),
        str(config.t_max),
        fmt(stats.best),
        fmt(stats.worst),
        fmt(stats.mean),
        fmt(stats.sd),
        str(config.master_seed),
    ]


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def run_document(record: RunRecord, config: ExperimentConfig) -> Dict[str, Any]:
    return {
        "run": record.run,
        "seed": record.seed,
        "master_seed": config.master_seed,
        "config": config.to_dict(),
        "ok": record.ok,
        "error": record.error,
        "best_value": _rounded(record.best_value),
        "best_point": [_rounded(v) for v in record.best_point],
        "iterations": record.iterations,
        "evaluations": record.evaluations,
        "history": [_rounded(v) for v in record.history],
    }


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def export_results(
    records: Sequence[RunRecord],
    stats: SummaryStats,
    config: ExperimentConfig,
    out_dir: Any,
) -> List[Path]:
    """Write ``summary.csv`` and one ``run_NNN.json`` per run.

    Numbers carry 10 significant digits and the output depends only on the
    inputs, so re-exporting gives identical bytes.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc
    written = []
    summary = out / "summary.csv"
    _write(summary, _csv_text(SUMMARY_HEADER, [summary_row(config, stats)]))
    written.append(summary)
    for record in sorted(records, key=lambda r: r.run):
        path = out / f"run_{record.run:03d}.json"
        _write(path, json.dumps(run_document(record, config), separators=(", ", ": ")) + "\n")
        written.append(path)
    return written


def load_run_config(path: Any) -> ExperimentConfig:
    """Config echoed into a run file."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return ExperimentConfig.from_dict(data["config"])


FUNCTION_SUITE = ("f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9", "f10")
CASE_STUDIES = ("spring", "truss3bar", "beam", "pressure_vessel", "ode_vibration")


def reproduce_tables(
    out_dir: Any,
    master_seed: int = 0,
    runs: int = 20,
    t_max: int = 1000,
    workers: int = 1,
    problems: Optional[Sequence[str]] = None,
) -> Dict[str, SummaryStats]:
    """Default settings on every function and case study.

    Writes ``functions.csv``, ``case_studies.csv``, a per-run listing for the
    pressure vessel, the raw run files under ``runs/<problem>/`` and a short
    ``report.md``.
    """
    out = Path(out_dir)
    names = list(problems) if problems is not None else list(FUNCTION_SUITE + CASE_STUDIES)
    header = SUMMARY_HEADER + ("reference", "success")
    tables: Dict[str, List[List[str]]] = {"functions": [], "case_studies": []}
    results: Dict[str, SummaryStats] = {}
    vessel_rows: List[List[str]] = []
    for name in names:
        config = ExperimentConfig(
            problem=name, runs=runs, t_max=t_max, master_seed=master_seed,
            workers=workers, out_dir=str(out / "runs" / name),
        )
        records, stats = run_experiment(config)
        results[name] = stats
        ref = reference_value(config.build_problem())
        row = summary_row(config, stats) + [fmt(ref) if ref is not None else "", str(stats.success_count)]
        tables["functions" if name in FUNCTION_SUITE else "case_studies"].append(row)
        if name == "pressure_vessel":
            problem = config.build_problem()
            for r in records:
                if not r.ok:
                    continue
                g = problem.constraint_values(r.best_point)
                vessel_rows.append(
                    [str(r.run), str(r.seed), fmt(r.best_value)]
                    + [fmt(v) for v in r.best_point]
                    + [fmt(float(np.max(g)))]
                )
    for key, rows in tables.items():
        if rows:
            _write(out / f"{key}.csv", _csv_text(header, rows))
    if vessel_rows:
        _write(
            out / "pressure_vessel_runs.csv",
            _csv_text(("run", "seed", "best", "x1", "x2", "x3", "x4", "max_g"), vessel_rows),
        )
    _write(out / "report.md", _report(results, runs, t_max, master_seed))
    return results


def _report(results: Dict[str, SummaryStats], runs: int, t_max: int, master_seed: int) -> str:
    lines = [
        "# Benchmark and case-study results",
        "",
        f"Default settings, n=10, t_max={t_max}, {runs} runs per problem, master seed {master_seed}.",
        "",
        f"Case studies use {runs} runs, the same count as the function suite. "
        "Spread statistics from a 10-run protocol are not directly comparable.",
        "",
        "| problem | best | worst | mean | sd | failed |",
        "|---|---|---|---|---|---|",
    ]
    for name, s in results.items():
        lines.append(f"| {name} | {fmt(s.best)} | {fmt(s.worst)} | {fmt(s.mean)} | {fmt(s.sd)} | {s.failed} |")
    return "\n".join(lines) + "\n"


__all__ = [
    "SUMMARY_HEADER",
    "ExperimentConfig",
    "SummaryStats",
    "summarize",
    "run_single",
    "run_experiment",
    "export_results",
    "load_run_config",
    "reproduce_tables",
]
