"""Generalized evolutionary metaheuristic: one parameterized update rule,
presets for many published algorithms, test problems and an experiment runner."""

from .benchmarks import BenchmarkFunction, benchmark_names, get_benchmark
from .engine import (
    Bounds,
    GemParams,
    RunRecord,
    SwarmState,
    centroid_top_m,
    derive_seed,
    greedy_select,
    initialize_population,
    position_update,
    run_gem,
    update_global_best,
    velocity_update,
)
from .engineering import ConstrainedProblem, get_engineering_problem
from .errors import ConfigurationError, EvaluationError, GemError
from .ode_fit import OdeFitProblem, OdeParams, simulate_step_response
from .presets import GEM_DEFAULT, ParamValue, PresetSpec, get_preset, list_presets, resolve_params
from .problems import get_problem, problem_names
from .runner import ExperimentConfig, SummaryStats, export_results, run_experiment, summarize

__version__ = "0.1.0"

__all__ = [
    "BenchmarkFunction", "benchmark_names", "get_benchmark",
    "Bounds", "GemParams", "RunRecord", "SwarmState", "centroid_top_m", "derive_seed",
    "greedy_select", "initialize_population", "position_update", "run_gem",
    "update_global_best", "velocity_update",
    "ConstrainedProblem", "get_engineering_problem",
    "ConfigurationError", "EvaluationError", "GemError",
    "OdeFitProblem", "OdeParams", "simulate_step_response",
    "GEM_DEFAULT", "ParamValue", "PresetSpec", "get_preset", "list_presets", "resolve_params",
    "get_problem", "problem_names",
    "ExperimentConfig", "SummaryStats", "export_results", "run_experiment", "summarize",
]
