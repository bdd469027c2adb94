"""Name lookup for every optimization problem the runner knows about."""

from __future__ import annotations

from typing import Any, List, Optional, Tuple

from . import benchmarks, engineering
from .errors import ConfigurationError
from .ode_fit import OdeFitProblem

ODE_NAME = "ode_vibration"


def problem_names() -> List[str]:
    return benchmarks.benchmark_names() + engineering.engineering_names() + [ODE_NAME]


def problem_catalog() -> List[Tuple[str, str, int]]:
    """``(name, description, dimension)`` rows for listing."""
    rows = []
    for key in benchmarks.benchmark_names():
        b = benchmarks.get_benchmark(key)
        alias = benchmarks._ENTRIES[key].name
        rows.append((key, f"{alias}, min {b.known_min_value:g}", b.dimension))
    for key in engineering.engineering_names():
        p = engineering.get_engineering_problem(key)
        rows.append((key, p.description, p.dimension))
    rows.append((ODE_NAME, "fit (zeta, omega) of a step response to measured data", 2))
    return rows


def canonical_name(name: str) -> str:
    if benchmarks.is_benchmark(name):
        return benchmarks._key(name)
    key = name.lower()
    if key in engineering.engineering_names() or key == ODE_NAME:
        return key
    raise ConfigurationError(f"unknown problem {name!r}; run `gem list-problems`")


def get_problem(name: str, dimension: Optional[int] = None, penalty_lambda: Optional[float] = None) -> Any:
    """Problem object exposing ``bounds``, batched ``evaluate`` and optional ``repair``."""
    key = canonical_name(name)
    if benchmarks.is_benchmark(key):
        if penalty_lambda is not None:
            raise ConfigurationError(f"{key} is unconstrained; --lambda does not apply")
        return benchmarks.get_benchmark(key, dimension)
    if dimension is not None:
        raise ConfigurationError(f"{key} has a fixed dimension; --dim does not apply")
    if key == ODE_NAME:
        if penalty_lambda is not None:
            raise ConfigurationError(f"{key} is unconstrained; --lambda does not apply")
        return OdeFitProblem()
    return engineering.get_engineering_problem(key, penalty_lambda)


def reference_value(problem: Any) -> Optional[float]:
    """Known or best-known minimum of a problem, if any."""
    for attr in ("known_min_value", "best_known_value"):
        value = getattr(problem, attr, None)
        if value is not None:
            return float(value)
    return None
