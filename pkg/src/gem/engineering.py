"""Constrained engineering design problems evaluated with a static penalty.

Constraints follow the ``g_i(x) <= 0`` convention.  The penalized objective
is ``f(x) + lam * sum(max(0, g_i(x)))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional

import numpy as np

from .engine import Bounds
from .errors import ConfigurationError, EvaluationError

SQRT2 = np.sqrt(2.0)
THICKNESS_STEP = 0.0625  # basic plate thickness, inches


@dataclass(frozen=True)
class LatticeConstraint:
    """Coordinates restricted to ``k * step`` with ``min_mult <= k <= max_mult``."""

    indices: tuple
    step: float = THICKNESS_STEP
    min_mult: int = 1
    max_mult: int = 99

    def apply(self, x: np.ndarray) -> np.ndarray:
        out = np.array(x, dtype=float, copy=True)
        idx = list(self.indices)
        k = np.clip(np.round(out[..., idx] / self.step), self.min_mult, self.max_mult)
        out[..., idx] = k * self.step
        return out


@dataclass(frozen=True)
class ConstrainedProblem:
    name: str
    bounds: Bounds
    objective: Callable[[np.ndarray], np.ndarray]
    constraints: Callable[[np.ndarray], np.ndarray]
    n_constraints: int
    penalty_lambda: float = 1000.0
    lattice: Optional[LatticeConstraint] = None
    best_known_value: float = float("nan")
    best_known_point: np.ndarray = field(default_factory=lambda: np.empty(0))
    description: str = ""

    @property
    def dimension(self) -> int:
        return self.bounds.dimension

    def with_penalty(self, penalty_lambda: float) -> "ConstrainedProblem":
        if penalty_lambda < 0:
            raise ConfigurationError("penalty coefficient must be non-negative")
        return replace(self, penalty_lambda=float(penalty_lambda))

    def _check(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dimension:
            raise ConfigurationError(f"{self.name} expects dimension {self.dimension}, got {x.shape[-1]}")
        return x

    def constraint_values(self, x) -> np.ndarray:
        """Raw ``g_i`` values, shape ``(..., k)``; division by zero yields inf or NaN."""
        x = self._check(x)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self.constraints(x)

    def evaluate(self, X) -> np.ndarray:
        """Batched penalized objective used by the optimizer.

        A constraint that is undefined at ``X`` (zero denominator, e.g. a
        zero-area truss) counts as an infinite violation so the point is never
        accepted; a NaN objective is passed through for the engine to report.
        """
        X = self._check(X)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            g = self.constraints(X)
            g = np.where(np.isnan(g), np.inf, g)
            violation = np.sum(np.maximum(0.0, g), axis=-1)
            return self.objective(X) + self.penalty_lambda * violation

    def repair(self, X) -> np.ndarray:
        if self.lattice is None:
            return np.asarray(X, dtype=float)
        return self.lattice.apply(X)


def evaluate_constraints(problem: ConstrainedProblem, x) -> List[float]:
    """``[g_1(x), ..., g_k(x)]`` for a single point, in declaration order."""
    g = np.atleast_1d(problem.constraint_values(x))
    bad = np.flatnonzero(~np.isfinite(g))
    if bad.size:
        i = int(bad[0])
        raise EvaluationError(
            f"{problem.name}: constraint g{i + 1} is not finite at x={np.asarray(x).tolist()} (division by zero)"
        )
    return [float(v) for v in g]


def penalized_objective(problem: ConstrainedProblem, x) -> float:
    g = evaluate_constraints(problem, x)
    f = float(problem.objective(np.asarray(x, dtype=float)))
    return f + problem.penalty_lambda * sum(max(0.0, gi) for gi in g)


def repair(problem: ConstrainedProblem, x) -> np.ndarray:
    return problem.repair(x)


def _spring_objective(x):
    return (2 + x[..., 2]) * x[..., 0] ** 2 * x[..., 1]


def _spring_constraints(x):
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return np.stack(
        [
            1 - x2**3 * x3 / (71785 * x1**4),
            (4 * x2**2 - x1 * x2) / (12566 * (x2 * x1**3 - x1**4)) + 1 / (5108 * x1**2) - 1,
            1 - 140.45 * x1 / (x2**2 * x3),
            (x1 + x2) / 1.5 - 1,
        ],
        axis=-1,
    )


TRUSS_LOAD = 2.0  # kN
TRUSS_STRESS = 2.0  # kN/cm^2


def _truss_objective(x):
    return 100 * (2 * SQRT2 * x[..., 0] + x[..., 1])


def _truss_constraints(x):
    x1, x2 = x[..., 0], x[..., 1]
    denom = SQRT2 * x1**2 + 2 * x1 * x2
    P, s = TRUSS_LOAD, TRUSS_STRESS
    return np.stack(
        [
            (SQRT2 * x1 + x2) * P / denom - s,
            x2 * P / denom - s,
            P / (x1 + SQRT2 * x2) - s,
        ],
        axis=-1,
    )


_BEAM_COEFFS = np.array([61.0, 37.0, 19.0, 7.0, 1.0])


def _beam_objective(x):
    return 0.0624 * np.sum(x, axis=-1)


def _beam_constraints(x):
    return (np.sum(_BEAM_COEFFS / x**3, axis=-1) - 1)[..., None]


def _vessel_objective(x):
    x1, x2, x3, x4 = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    return 0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3**2 + 3.1661 * x1**2 * x4 + 19.84 * x1**2 * x3


def _vessel_constraints(x):
    x1, x2, x3, x4 = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    return np.stack(
        [
            -x1 + 0.0193 * x3,
            -x2 + 0.00954 * x3,
            -np.pi * x3**2 * x4 - 4 * np.pi / 3 * x3**3 + 1_296_000,
            x4 - 240,
        ],
        axis=-1,
    )


def spring() -> ConstrainedProblem:
    return ConstrainedProblem(
        name="spring",
        bounds=Bounds([0.05, 0.25, 2.0], [1.00, 1.30, 15.0]),
        objective=_spring_objective,
        constraints=_spring_constraints,
        n_constraints=4,
        best_known_value=0.01266522,
        best_known_point=np.array([0.05169, 0.35673, 11.2885]),
        description="tension/compression spring: wire diameter, coil diameter, active coils",
    )


def truss3bar() -> ConstrainedProblem:
    return ConstrainedProblem(
        name="truss3bar",
        bounds=Bounds([0.0, 0.0], [1.0, 1.0]),
        objective=_truss_objective,
        constraints=_truss_constraints,
        n_constraints=3,
        best_known_value=263.8958,
        best_known_point=np.array([0.78853, 0.40866]),
        description="three-bar truss: two cross-section areas, P=2 kN, stress limit 2 kN/cm^2",
    )


def beam() -> ConstrainedProblem:
    return ConstrainedProblem(
        name="beam",
        bounds=Bounds(np.full(5, 0.01), np.full(5, 100.0)),
        objective=_beam_objective,
        constraints=_beam_constraints,
        n_constraints=1,
        best_known_value=1.33997,
        best_known_point=np.array([6.0202, 5.3082, 4.5042, 3.4856, 2.1557]),
        description="cantilever beam with five hollow sections under an end load",
    )


def pressure_vessel() -> ConstrainedProblem:
    h = THICKNESS_STEP
    return ConstrainedProblem(
        name="pressure_vessel",
        bounds=Bounds([h, h, 10.0, 10.0], [99 * h, 99 * h, 200.0, 200.0]),
        objective=_vessel_objective,
        constraints=_vessel_constraints,
        n_constraints=4,
        penalty_lambda=1e5,
        lattice=LatticeConstraint(indices=(0, 1)),
        best_known_value=6059.714335,
        best_known_point=np.array([0.8125, 0.4375, 42.098446, 176.636596]),
        description="cylindrical pressure vessel; shell and head thickness are multiples of 0.0625 in",
    )


_FACTORIES: Dict[str, Callable[[], ConstrainedProblem]] = {
    "spring": spring,
    "truss3bar": truss3bar,
    "beam": beam,
    "pressure_vessel": pressure_vessel,
}


def engineering_names() -> List[str]:
    return list(_FACTORIES)


def get_engineering_problem(name: str, penalty_lambda: Optional[float] = None) -> ConstrainedProblem:
    try:
        problem = _FACTORIES[name.lower()]()
    except KeyError:
        raise ConfigurationError(f"unknown engineering problem {name!r}") from None
    if penalty_lambda is not None:
        problem = problem.with_penalty(penalty_lambda)
    return problem
