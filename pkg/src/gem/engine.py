"""Population state and update rules of the generalized evolutionary metaheuristic.

Every operation works on a single agent (1-D arrays) or on a whole population
(2-D arrays with one row per agent); the main loop uses the vectorized form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, NamedTuple, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConfigurationError, EvaluationError

FloatArray = NDArray[np.float64]
Coefficient = Union[float, FloatArray]

EPSILON_KINDS = ("normal", "uniform")
DEFAULT_EPSILON = "normal"
H_MODES = ("constant_one", "identity_of_position")
NOISE_KINDS = ("normal", "levy", "uniform_centered", "normal_unit_mean", "signed_box")
LEVY_BETA = 1.5


@dataclass(frozen=True)
class Bounds:
    """Box constraints ``lower <= x <= upper``."""

    lower: FloatArray
    upper: FloatArray

    def __post_init__(self) -> None:
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ConfigurationError(
                f"bounds must be 1-D and of equal length, got {lower.shape} and {upper.shape}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("bounds must be finite")
        if np.any(lower > upper):
            raise ConfigurationError("lower bound exceeds upper bound")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, lo: float, hi: float, dimension: int) -> "Bounds":
        return cls(np.full(dimension, lo, dtype=float), np.full(dimension, hi, dtype=float))

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    @property
    def width(self) -> FloatArray:
        return self.upper - self.lower

    def contains(self, x: ArrayLike) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= self.lower) & (x <= self.upper)))


@dataclass
class GemParams:
    """The scalar controls of one iteration, resolved from a preset.

    Coefficients are floats for a single agent.  For a population they are
    arrays of shape ``(n, 1)`` or ``(n, D)`` so they broadcast against the
    ``(n, D)`` position matrix.  ``h_mode`` and ``noise`` are strings, or
    arrays of strings of shape ``(n,)`` when agents follow different branches.
    """

    a: Coefficient = 1.0
    b: Coefficient = 0.0
    c: Coefficient = 0.0
    theta: Coefficient = 0.0
    p: Coefficient = 0.0
    q: Coefficient = 0.0
    r: Coefficient = 0.0
    m: Optional[int] = None
    h_mode: Any = "constant_one"
    noise: Any = "normal"


class Agent(NamedTuple):
    position: FloatArray
    velocity: FloatArray
    personal_best: FloatArray
    personal_best_value: float
    current_value: float


@dataclass
class SwarmState:
    positions: FloatArray
    velocities: FloatArray
    values: FloatArray
    personal_best: FloatArray
    personal_best_values: FloatArray
    global_best: FloatArray
    global_best_value: float
    centroid: FloatArray
    iteration: int = 0

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    def agent(self, i: int) -> Agent:
        return Agent(
            self.positions[i].copy(),
            self.velocities[i].copy(),
            self.personal_best[i].copy(),
            float(self.personal_best_values[i]),
            float(self.values[i]),
        )


@dataclass
class RunRecord:
    """Outcome of one optimizer run."""

    best_value: float
    best_point: FloatArray
    history: FloatArray
    iterations: int
    evaluations: int
    seed: Optional[int] = None
    run: int = 0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def make_rng(seed: Union[int, np.random.Generator, None]) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derive_seed(master_seed: int, run_index: int) -> int:
    """Seed for run ``run_index``, mixed from the master seed.

    The two integers are hashed by ``numpy.random.SeedSequence([master_seed,
    run_index])`` and the first 64-bit word of its generated state is used.
    """
    if master_seed < 0 or run_index < 0:
        raise ConfigurationError("seeds and run indices must be non-negative")
    state = np.random.SeedSequence([master_seed, run_index]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def _column(value: Any) -> Any:
    """Lift a per-agent vector of shape (n,) to (n, 1) for broadcasting."""
    if isinstance(value, np.ndarray) and value.ndim == 1:
        return value[:, None]
    return value


def _as_mask(codes: Any, target: str, lead_shape: tuple) -> NDArray[np.bool_]:
    return np.broadcast_to(np.asarray(codes) == target, lead_shape)


def clamp_to_bounds(x: ArrayLike, bounds: Bounds) -> FloatArray:
    return np.clip(np.asarray(x, dtype=float), bounds.lower, bounds.upper)


def initialize_population(
    bounds: Bounds,
    n: int,
    rng: np.random.Generator,
    evaluate: Callable[[FloatArray], FloatArray],
    *,
    dimension: Optional[int] = None,
    repair: Optional[Callable[[FloatArray], FloatArray]] = None,
    m: Optional[int] = None,
    u: Optional[ArrayLike] = None,
) -> SwarmState:
    """Draw ``n`` agents uniformly in the box and evaluate them.

    ``u`` overrides the uniform draws (shape ``(n, D)``), which is only useful
    for testing.  Velocities start at zero and personal bests equal the
    initial positions.
    """
    if n < 1:
        raise ConfigurationError(f"population size must be >= 1, got {n}")
    if dimension is not None and dimension != bounds.dimension:
        raise ConfigurationError(
            f"dimension {dimension} does not match bounds of dimension {bounds.dimension}"
        )
    D = bounds.dimension
    if u is None:
        u = rng.random((n, D))
    else:
        u = np.broadcast_to(np.asarray(u, dtype=float), (n, D))
    positions = bounds.lower + u * bounds.width
    if repair is not None:
        positions = repair(positions)
    values = _checked(evaluate(positions), iteration=0)
    state = SwarmState(
        positions=positions,
        velocities=np.zeros_like(positions),
        values=values,
        personal_best=positions.copy(),
        personal_best_values=values.copy(),
        global_best=positions[0].copy(),
        global_best_value=np.inf,
        centroid=positions.mean(axis=0),
        iteration=0,
    )
    return update_global_best(state, m=m)


def centroid_top_m(state: SwarmState, m: Optional[int] = None) -> FloatArray:
    """Mean position of the ``m`` agents with the lowest current values.

    Ties are resolved in favour of the lower agent index.
    """
    n = state.n
    if m is None:
        m = n
    if not 1 <= m <= n:
        raise ConfigurationError(f"m must lie in [1, {n}], got {m}")
    if m == n:
        return state.positions.mean(axis=0)
    order = np.argsort(state.values, kind="stable")[:m]
    return state.positions[order].mean(axis=0)


def update_global_best(
    state: SwarmState,
    m: Optional[int] = None,
    evaluate_centroid: Optional[Callable[[FloatArray], float]] = None,
) -> SwarmState:
    """Refresh the centroid and the best-so-far solution in place.

    Candidates are every agent's current position and personal best, the
    previous global best and, when ``evaluate_centroid`` is given, the
    centroid itself.  The global best only changes on strict improvement.
    """
    state.centroid = centroid_top_m(state, m)
    use_pbest = state.personal_best_values < state.values
    per_agent = np.where(use_pbest, state.personal_best_values, state.values)
    i = int(np.argmin(per_agent))
    if per_agent[i] < state.global_best_value:
        source = state.personal_best if use_pbest[i] else state.positions
        state.global_best = source[i].copy()
        state.global_best_value = float(per_agent[i])
    if evaluate_centroid is not None:
        fc = float(evaluate_centroid(state.centroid))
        if np.isnan(fc):
            raise EvaluationError(f"centroid evaluated to NaN at iteration {state.iteration}")
        if fc < state.global_best_value:
            state.global_best = state.centroid.copy()
            state.global_best_value = fc
    return state


def draw_epsilon(rng: np.random.Generator, shape: tuple, kind: str = DEFAULT_EPSILON) -> FloatArray:
    if kind == "normal":
        return rng.standard_normal(shape)
    if kind == "uniform":
        return rng.random(shape)
    raise ConfigurationError(f"unknown epsilon distribution {kind!r}; expected one of {EPSILON_KINDS}")


def velocity_update(
    velocity: ArrayLike,
    position: ArrayLike,
    personal_best: ArrayLike,
    global_best: ArrayLike,
    params: GemParams,
    rng: Optional[np.random.Generator] = None,
    *,
    eps1: Optional[ArrayLike] = None,
    eps2: Optional[ArrayLike] = None,
    epsilon: str = DEFAULT_EPSILON,
) -> FloatArray:
    """Inertia plus randomized attraction to the global and personal bests.

    ``v_new = p*v + q*eps1*(g - x) + r*eps2*(pbest - x)`` with fresh
    per-coordinate draws for ``eps1`` and ``eps2`` unless they are given.
    """
    v = np.asarray(velocity, dtype=float)
    x = np.asarray(position, dtype=float)
    if eps1 is None:
        eps1 = draw_epsilon(rng, x.shape, epsilon)
    if eps2 is None:
        eps2 = draw_epsilon(rng, x.shape, epsilon)
    p, q, r = _column(params.p), _column(params.q), _column(params.r)
    return (
        p * v
        + q * np.asarray(eps1) * (np.asarray(global_best) - x)
        + r * np.asarray(eps2) * (np.asarray(personal_best) - x)
    )


def levy_steps(beta: float, rng: np.random.Generator, size: Any = None) -> Any:
    # Mantegna's algorithm; kept here so the engine does not import presets.
    from .presets import levy_sample

    return levy_sample(beta, rng, size=size)


def draw_perturbation(
    x: FloatArray,
    noise: Any,
    rng: np.random.Generator,
    bounds: Optional[Bounds] = None,
) -> FloatArray:
    """Random vector(s) for the perturbation term, one kind per agent."""
    lead = x.shape[:-1]
    zeta = rng.standard_normal(x.shape)
    if isinstance(noise, str) and noise == "normal":
        return zeta
    codes = np.asarray(noise)
    for kind in np.unique(codes):
        kind = str(kind)
        if kind == "normal":
            continue
        mask = _as_mask(codes, kind, lead)[..., None]
        if kind == "levy":
            alt = levy_steps(LEVY_BETA, rng, size=x.shape)
        elif kind == "uniform_centered":
            alt = rng.random(x.shape) - 0.5
        elif kind == "normal_unit_mean":
            alt = zeta + 1.0
        elif kind == "signed_box":
            if bounds is None:
                raise ConfigurationError("signed_box perturbation requires bounds")
            sign = np.where(rng.random(x.shape) < 0.5, -1.0, 1.0)
            alt = sign * (bounds.lower + rng.random(x.shape) * bounds.width)
        else:
            raise ConfigurationError(f"unknown perturbation kind {kind!r}")
        zeta = np.where(mask, alt, zeta)
    return zeta


def position_update(
    position: ArrayLike,
    partner: ArrayLike,
    centroid: ArrayLike,
    v_new: ArrayLike,
    params: GemParams,
    rng: Optional[np.random.Generator] = None,
    *,
    zeta: Optional[ArrayLike] = None,
    bounds: Optional[Bounds] = None,
) -> FloatArray:
    """Candidate position built from the centrality, similarity, kinetic and perturbation terms.

    ``x_new = a*x + (1-a)*centroid + b*(partner - x) + c*v_new + theta*h(x)*zeta``
    where ``h(x)`` is 1 or ``x`` depending on ``params.h_mode``.
    """
    x = np.asarray(position, dtype=float)
    a, b, c, theta = (_column(v) for v in (params.a, params.b, params.c, params.theta))
    out = a * x + (1.0 - a) * np.asarray(centroid) + b * (np.asarray(partner) - x) + c * np.asarray(v_new)
    if np.all(np.asarray(theta) == 0):
        return out
    if zeta is None:
        zeta = draw_perturbation(x, params.noise, rng, bounds)
    if isinstance(params.h_mode, str) and params.h_mode == "constant_one":
        return out + theta * np.asarray(zeta)
    identity = _as_mask(params.h_mode, "identity_of_position", x.shape[:-1])[..., None]
    h = np.where(identity, x, 1.0)
    return out + theta * h * np.asarray(zeta)


def greedy_select(old_position: ArrayLike, old_value: ArrayLike, new_position: ArrayLike, new_value: ArrayLike):
    """Keep the new solution when it is no worse than the old one (minimization).

    Works on a single pair or row-wise on a population.
    """
    old_f = np.asarray(old_value, dtype=float)
    new_f = np.asarray(new_value, dtype=float)
    if np.isnan(old_f).any() or np.isnan(new_f).any():
        raise EvaluationError("cannot compare NaN objective values")
    accept = new_f <= old_f
    x = np.where(accept[..., None], np.asarray(new_position, dtype=float), np.asarray(old_position, dtype=float))
    f = np.where(accept, new_f, old_f)
    if f.ndim == 0:
        return x, float(f)
    return x, f


def draw_partners(rng: np.random.Generator, n: int) -> NDArray[np.intp]:
    """Uniform partner index ``j != i`` for every agent ``i``."""
    if n == 1:
        return np.zeros(1, dtype=np.intp)
    j = rng.integers(0, n - 1, size=n)
    return j + (j >= np.arange(n))


def _checked(values: Any, iteration: int) -> FloatArray:
    values = np.asarray(values, dtype=float)
    bad = np.flatnonzero(np.isnan(values))
    if bad.size:
        raise EvaluationError(
            f"objective returned NaN at iteration {iteration} for agent(s) {bad.tolist()}"
        )
    return values


def run_gem(
    problem: Any,
    preset: Any = None,
    n: int = 10,
    t_max: int = 1000,
    rng: Union[int, np.random.Generator, None] = None,
    *,
    m: Optional[int] = None,
    evaluate_centroid: bool = False,
    epsilon: str = DEFAULT_EPSILON,
    callback: Optional[Callable[[SwarmState], None]] = None,
) -> RunRecord:
    """Minimize ``problem`` with one run of the optimizer.

    ``problem`` needs ``bounds`` and a batched ``evaluate(X) -> values``; an
    optional ``repair(X)`` is applied after clamping.  ``preset`` is a
    :class:`~gem.presets.PresetSpec`, a registered name, or ``None`` for the
    default settings.  ``rng`` may be a seed or a generator.  All agents of
    one sweep see the global best and centroid of the previous sweep.
    """
    from .presets import ResolveContext, get_preset, resolve_batch

    if t_max < 1:
        raise ConfigurationError(f"t_max must be >= 1, got {t_max}")
    if n < 1:
        raise ConfigurationError(f"population size must be >= 1, got {n}")
    if epsilon not in EPSILON_KINDS:
        raise ConfigurationError(f"unknown epsilon distribution {epsilon!r}")
    spec = get_preset(preset)
    seed = None if isinstance(rng, np.random.Generator) else rng
    gen = make_rng(rng)
    bounds: Bounds = problem.bounds
    repair = getattr(problem, "repair", None)

    def evaluate(X: FloatArray) -> FloatArray:
        return np.asarray(problem.evaluate(X), dtype=float)

    centroid_eval = None
    if evaluate_centroid:
        def centroid_eval(c: FloatArray) -> float:
            c = c[None, :]
            if repair is not None:
                c = repair(c)
            return float(evaluate(c)[0])

    state = initialize_population(bounds, n, gen, evaluate, repair=repair, m=m)
    if centroid_eval is not None:
        update_global_best(state, m, centroid_eval)
    evaluations = n + (1 if evaluate_centroid else 0)
    history = np.empty(t_max)

    for t in range(1, t_max + 1):
        partners = draw_partners(gen, n)
        ctx = ResolveContext.from_state(state, partners, bounds)
        params = resolve_batch(spec, t, t_max, gen, n, context=ctx)
        v_new = velocity_update(
            state.velocities, state.positions, state.personal_best, state.global_best,
            params, gen, epsilon=epsilon,
        )
        candidates = position_update(
            state.positions, state.positions[partners], state.centroid, v_new, params, gen, bounds=bounds,
        )
        candidates = clamp_to_bounds(candidates, bounds)
        if repair is not None:
            candidates = repair(candidates)
        new_values = _checked(evaluate(candidates), iteration=t)
        evaluations += n

        state.positions, state.values = greedy_select(state.positions, state.values, candidates, new_values)
        state.velocities = v_new
        improved = state.values < state.personal_best_values
        state.personal_best[improved] = state.positions[improved]
        state.personal_best_values[improved] = state.values[improved]
        state.iteration = t
        update_global_best(state, m, centroid_eval)
        if centroid_eval is not None:
            evaluations += 1
        history[t - 1] = state.global_best_value
        if callback is not None:
            callback(state)

    return RunRecord(
        best_value=float(state.global_best_value),
        best_point=state.global_best.copy(),
        history=history,
        iterations=t_max,
        evaluations=evaluations,
        seed=seed if isinstance(seed, int) else None,
    )
