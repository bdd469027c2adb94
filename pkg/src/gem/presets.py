"""Parameter schedules and the registry of named algorithm presets.

A preset assigns a :class:`ParamValue` to each of the seven update
coefficients.  Values may be constants, iteration schedules, random draws, or
quantities computed from the distance between an agent and its partner or
bests.  Presets with two update rules carry a :class:`BranchRule` that picks
one rule per agent and iteration with a Bernoulli draw.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np

from .engine import H_MODES, NOISE_KINDS, Bounds, GemParams
from .errors import ConfigurationError

COEFFICIENTS = ("a", "b", "c", "theta", "p", "q", "r")
FIDELITIES = ("exact", "scheduled", "approximate")
DISTANCE_REFS = ("partner", "personal_best", "global_best")


def levy_sample(beta: float, rng: np.random.Generator, size: Any = None) -> Any:
    """Heavy-tailed step via Mantegna's algorithm.

    Returns ``u / |v|**(1/beta)`` with ``u ~ N(0, sigma_u**2)`` and
    ``v ~ N(0, 1)``; the tails decay like ``|s|**(-1 - beta)``.  Steps are
    symmetric about zero, so the step length is ``abs(s)``.
    """
    if not 0.0 < beta < 2.0:
        raise ConfigurationError(f"Levy exponent must lie in (0, 2), got {beta}")
    sigma_u = (
        math.gamma(1 + beta) * math.sin(math.pi * beta / 2)
        / (math.gamma((1 + beta) / 2) * beta * 2 ** ((beta - 1) / 2))
    ) ** (1 / beta)
    u = rng.normal(0.0, sigma_u, size=size)
    v = rng.standard_normal(size=size)
    return u / np.abs(v) ** (1 / beta)


@dataclass
class ResolveContext:
    """State-dependent inputs for distance-based parameter values.

    Squared distances (shape ``(n,)``) are computed on first use from the
    swarm state, or can be given directly.  Bounds are needed by values that
    scale with the search box.
    """

    partner_sq: Optional[np.ndarray] = None
    personal_best_sq: Optional[np.ndarray] = None
    global_best_sq: Optional[np.ndarray] = None
    bounds: Optional[Bounds] = None
    state: Any = None
    partners: Optional[np.ndarray] = None

    @classmethod
    def from_state(cls, state: Any, partners: np.ndarray, bounds: Optional[Bounds]) -> "ResolveContext":
        return cls(bounds=bounds, state=state, partners=partners)

    def squared_distance(self, ref: str, size: int) -> np.ndarray:
        value = getattr(self, f"{ref}_sq")
        if value is None and self.state is not None:
            x = self.state.positions
            target = {
                "partner": lambda: x[self.partners],
                "personal_best": lambda: self.state.personal_best,
                "global_best": lambda: self.state.global_best,
            }[ref]()
            value = np.sum((target - x) ** 2, axis=-1)
            setattr(self, f"{ref}_sq", value)
        if value is None:
            return np.zeros(size)
        return np.asarray(value, dtype=float)


_KIND_ARITY = {
    "constant": 1,
    "geometric_decay": 1,
    "exponential_decay": 2,
    "power_decay": 1,
    "linear_decay": 2,
    "inverse_square": 1,
    "henry": 3,
    "upper_bound_ratio": 0,
    "uniform_draw": 2,
    "normal_draw": 2,
    "levy_draw": 1,
    "spiral_draw": 0,
    "distance_kernel": 3,
    "distance": 1,
    "normalized_distance": 1,
    "product": 2,
}


@dataclass(frozen=True)
class ParamValue:
    """One coefficient's rule for producing a value at iteration ``t``.

    ==================== =========================== ==============================
    kind                 args                        value
    ==================== =========================== ==============================
    constant             (v,)                        v
    geometric_decay      (base,)                     base**t
    exponential_decay    (g0, alpha)                 g0*exp(-alpha*t/t_max)
    power_decay          (p,)                        1 - (t/t_max)**(1/p)
    linear_decay         (start, end)                start + (end-start)*t/t_max
    inverse_square       (s_max,)                    s_max/t**2
    henry                (h0, c, t0)                 h0*exp(-c*sum_{s<t}(1/T(s) - 1/t0)),
                                                     T(s) = exp(-s/t_max)
    upper_bound_ratio    ()                          upper/t_max, per coordinate
    uniform_draw         (lo, hi)                    U(lo, hi), per agent
    normal_draw          (mean, sd)                  N(mean, sd**2), per agent
    levy_draw            (beta,)                     Mantegna step, per agent
    spiral_draw          ()                          exp(R)*cos(2*pi*R), R ~ U(-1, 1)
    distance_kernel      (ref, scale, gamma)         scale*exp(-gamma*d**2)
    distance             (ref,)                      d
    normalized_distance  (ref,)                      d / |upper - lower|
    product              (ParamValue, ParamValue)    product of both
    ==================== =========================== ==============================

    ``d`` is the distance from the agent to ``ref`` (partner, personal_best
    or global_best).
    """

    kind: str
    args: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in _KIND_ARITY:
            raise ConfigurationError(f"unknown parameter kind {self.kind!r}")
        if len(self.args) != _KIND_ARITY[self.kind]:
            raise ConfigurationError(
                f"{self.kind} takes {_KIND_ARITY[self.kind]} argument(s), got {len(self.args)}"
            )
        if self.kind == "geometric_decay" and not 0.0 < self.args[0] <= 1.0:
            raise ConfigurationError(f"geometric decay base must lie in (0, 1], got {self.args[0]}")
        if self.kind == "levy_draw" and not 0.0 < self.args[0] < 2.0:
            raise ConfigurationError(f"Levy exponent must lie in (0, 2), got {self.args[0]}")
        if self.kind in ("distance_kernel", "distance", "normalized_distance") and self.args[0] not in DISTANCE_REFS:
            raise ConfigurationError(f"unknown distance reference {self.args[0]!r}")

    @property
    def is_random(self) -> bool:
        if self.kind == "product":
            return self.args[0].is_random or self.args[1].is_random
        return self.kind in ("uniform_draw", "normal_draw", "levy_draw", "spiral_draw")

    def value(
        self,
        t: int,
        t_max: int,
        rng: Optional[np.random.Generator] = None,
        size: int = 1,
        context: Optional[ResolveContext] = None,
    ) -> np.ndarray:
        """Values for ``size`` agents, shape ``(size, 1)`` or ``(size, D)``."""
        k, args = self.kind, self.args
        if k == "constant":
            v = float(args[0])
        elif k == "geometric_decay":
            v = float(args[0]) ** t
        elif k == "exponential_decay":
            v = args[0] * math.exp(-args[1] * t / t_max)
        elif k == "power_decay":
            v = 1.0 - (t / t_max) ** (1.0 / args[0])
        elif k == "linear_decay":
            v = args[0] + (args[1] - args[0]) * t / t_max
        elif k == "inverse_square":
            v = args[0] / t**2
        elif k == "henry":
            h0, c, t0 = args
            # sum_{s=0}^{t-1} exp(s/t_max) as a geometric series
            ratio = math.exp(1.0 / t_max)
            total = math.expm1(t / t_max) / (ratio - 1.0) - t / t0
            v = h0 * math.exp(-c * total)
        elif k == "upper_bound_ratio":
            if context is None or context.bounds is None:
                raise ConfigurationError("upper_bound_ratio needs the problem bounds")
            return np.tile(context.bounds.upper / t_max, (size, 1))
        elif k == "uniform_draw":
            return rng.uniform(args[0], args[1], size=(size, 1))
        elif k == "normal_draw":
            return rng.normal(args[0], args[1], size=(size, 1))
        elif k == "levy_draw":
            return levy_sample(args[0], rng, size=(size, 1))
        elif k == "spiral_draw":
            R = rng.uniform(-1.0, 1.0, size=(size, 1))
            return np.exp(R) * np.cos(2 * np.pi * R)
        elif k in ("distance_kernel", "distance", "normalized_distance"):
            ctx = context or ResolveContext()
            d2 = ctx.squared_distance(args[0], size)[:, None]
            if k == "distance_kernel":
                return args[1] * np.exp(-args[2] * d2)
            d = np.sqrt(d2)
            if k == "distance":
                return d
            if ctx.bounds is None:
                raise ConfigurationError("normalized_distance needs the problem bounds")
            return d / float(np.linalg.norm(ctx.bounds.width))
        elif k == "product":
            return args[0].value(t, t_max, rng, size, context) * args[1].value(t, t_max, rng, size, context)
        else:  # pragma: no cover - guarded in __post_init__
            raise ConfigurationError(f"unknown parameter kind {k!r}")
        return np.full((size, 1), v)

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == "product":
            return {"kind": "product", "args": [a.to_dict() for a in self.args]}
        return {"kind": self.kind, "args": list(self.args)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ParamValue":
        if data["kind"] == "product":
            return cls("product", tuple(cls.from_dict(a) for a in data["args"]))
        return cls(data["kind"], tuple(data["args"]))


def const(v: float) -> ParamValue:
    return ParamValue("constant", (float(v),))


def geometric(base: float) -> ParamValue:
    return ParamValue("geometric_decay", (float(base),))


def exponential(g0: float, alpha: float) -> ParamValue:
    return ParamValue("exponential_decay", (float(g0), float(alpha)))


def linear(start: float, end: float) -> ParamValue:
    return ParamValue("linear_decay", (float(start), float(end)))


def uniform(lo: float, hi: float) -> ParamValue:
    return ParamValue("uniform_draw", (float(lo), float(hi)))


def times(*values: Union[ParamValue, float]) -> ParamValue:
    """Product of several values; plain numbers become constants."""
    pvs = [v if isinstance(v, ParamValue) else const(v) for v in values]
    out = pvs[0]
    for pv in pvs[1:]:
        out = ParamValue("product", (out, pv))
    return out


ZERO, ONE = const(0.0), const(1.0)


@dataclass(frozen=True)
class ParamBundle:
    """A full assignment of the update coefficients for one update rule."""

    a: ParamValue = ONE
    b: ParamValue = ZERO
    c: ParamValue = ZERO
    theta: ParamValue = ZERO
    p: ParamValue = ZERO
    q: ParamValue = ZERO
    r: ParamValue = ZERO
    h_mode: str = "constant_one"
    noise: str = "normal"

    def __post_init__(self) -> None:
        if self.h_mode not in H_MODES:
            raise ConfigurationError(f"unknown h mode {self.h_mode!r}")
        if self.noise not in NOISE_KINDS:
            raise ConfigurationError(f"unknown perturbation kind {self.noise!r}")

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {name: getattr(self, name).to_dict() for name in COEFFICIENTS}
        out["h_mode"] = self.h_mode
        out["noise"] = self.noise
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ParamBundle":
        kwargs: Dict[str, Any] = {name: ParamValue.from_dict(data[name]) for name in COEFFICIENTS}
        return cls(h_mode=data["h_mode"], noise=data["noise"], **kwargs)


@dataclass(frozen=True)
class BranchRule:
    """Two update rules; each agent takes ``branch_a`` with ``switch_probability``."""

    switch_probability: float
    branch_a: ParamBundle
    branch_b: ParamBundle

    def __post_init__(self) -> None:
        if not 0.0 <= self.switch_probability <= 1.0:
            raise ConfigurationError("switch probability must lie in [0, 1]")


@dataclass(frozen=True)
class PresetSpec:
    name: str
    bundle: Optional[ParamBundle] = None
    branch: Optional[BranchRule] = None
    fidelity: str = "exact"
    title: str = ""
    notes: str = ""

    def __post_init__(self) -> None:
        if (self.bundle is None) == (self.branch is None):
            raise ConfigurationError(f"preset {self.name!r} needs exactly one of bundle or branch")
        if self.fidelity not in FIDELITIES:
            raise ConfigurationError(f"unknown fidelity {self.fidelity!r}")

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name, "title": self.title, "fidelity": self.fidelity}
        if self.bundle is not None:
            out["params"] = self.bundle.to_dict()
        else:
            out["branch"] = {
                "switch_probability": self.branch.switch_probability,
                "branch_a": self.branch.branch_a.to_dict(),
                "branch_b": self.branch.branch_b.to_dict(),
            }
        out["notes"] = self.notes
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PresetSpec":
        bundle = branch = None
        if "params" in data:
            bundle = ParamBundle.from_dict(data["params"])
        else:
            br = data["branch"]
            branch = BranchRule(
                float(br["switch_probability"]),
                ParamBundle.from_dict(br["branch_a"]),
                ParamBundle.from_dict(br["branch_b"]),
            )
        return cls(
            name=data["name"], bundle=bundle, branch=branch,
            fidelity=data["fidelity"], title=data.get("title", ""), notes=data.get("notes", ""),
        )


def _resolve_bundle(
    bundle: ParamBundle, t: int, t_max: int, rng: np.random.Generator, n: int,
    context: Optional[ResolveContext],
) -> GemParams:
    values = {name: getattr(bundle, name).value(t, t_max, rng, n, context) for name in COEFFICIENTS}
    return GemParams(**values, h_mode=bundle.h_mode, noise=bundle.noise)


def resolve_batch(
    preset: PresetSpec,
    t: int,
    t_max: int,
    rng: np.random.Generator,
    n: int,
    *,
    context: Optional[ResolveContext] = None,
) -> GemParams:
    """Coefficients for all ``n`` agents at iteration ``t``.

    Branching presets draw one Bernoulli number per agent; both branches are
    resolved and the chosen one is kept for each agent.
    """
    if not 1 <= t <= t_max:
        raise ConfigurationError(f"iteration {t} outside [1, {t_max}]")
    if preset.branch is None:
        return _resolve_bundle(preset.bundle, t, t_max, rng, n, context)
    rule = preset.branch
    take_a = rng.random(n) < rule.switch_probability
    pa = _resolve_bundle(rule.branch_a, t, t_max, rng, n, context)
    pb = _resolve_bundle(rule.branch_b, t, t_max, rng, n, context)
    merged = {
        name: np.where(take_a[:, None], getattr(pa, name), getattr(pb, name)) for name in COEFFICIENTS
    }
    return GemParams(
        **merged,
        h_mode=np.where(take_a, pa.h_mode, pb.h_mode),
        noise=np.where(take_a, pa.noise, pb.noise),
    )


def resolve_params(
    preset: Union[PresetSpec, str],
    t: int,
    t_max: int,
    rng: Optional[np.random.Generator] = None,
    *,
    context: Optional[ResolveContext] = None,
) -> GemParams:
    """Coefficients for a single agent as plain floats.

    Coefficients that vary per coordinate (``upper_bound_ratio``) come back as
    1-D arrays.
    """
    spec = get_preset(preset)
    if rng is None:
        rng = np.random.default_rng()
    batch = resolve_batch(spec, t, t_max, rng, 1, context=context)
    out: Dict[str, Any] = {}
    for name in COEFFICIENTS:
        row = np.asarray(getattr(batch, name))[0]
        out[name] = float(row[0]) if row.shape == (1,) else row.copy()
    h_mode, noise = (str(np.asarray(v).reshape(-1)[0]) for v in (batch.h_mode, batch.noise))
    return GemParams(**out, h_mode=h_mode, noise=noise)


def _preset(name: str, title: str, fidelity: str, notes: str, bundle=None, branch=None) -> PresetSpec:
    return PresetSpec(name=name, bundle=bundle, branch=branch, fidelity=fidelity, title=title, notes=notes)


# Default settings used throughout the experiments.
GEM_DEFAULT = _preset(
    "GEM", "Generalized evolutionary metaheuristic, default settings", "scheduled",
    "a=1, b=0.7, c=1, p=0.7, q=r=1 and theta=0.97**t.",
    bundle=ParamBundle(
        a=ONE, b=const(0.7), c=ONE, theta=geometric(0.97), p=const(0.7), q=ONE, r=ONE,
    ),
)

_PRESETS: List[PresetSpec] = [
    _preset(
        "DE", "Differential evolution", "exact",
        "Mutation weight F=0.7; crossover is not modelled.",
        bundle=ParamBundle(a=ONE, b=const(0.7), c=ZERO, theta=ZERO),
    ),
    _preset(
        "PSO", "Particle swarm optimization", "exact",
        "Learning factors alpha=beta=2.",
        bundle=ParamBundle(a=ONE, b=ZERO, c=ONE, theta=ZERO, p=ONE, q=const(2.0), r=const(2.0)),
    ),
    _preset(
        "FA", "Firefly algorithm", "scheduled",
        "Attractiveness beta0*exp(-gamma*r_ij**2) with beta0=1, gamma=1.",
        bundle=ParamBundle(
            a=ONE, b=ParamValue("distance_kernel", ("partner", 1.0, 1.0)), c=ZERO, theta=geometric(0.97),
        ),
    ),
    _preset(
        "SA", "Simulated annealing", "exact",
        "Pure Gaussian random walk with greedy acceptance (no Metropolis step).",
        bundle=ParamBundle(a=ONE, b=ZERO, c=ZERO, theta=ONE),
    ),
    _preset(
        "ABC", "Artificial bee colony", "exact",
        "Phi drawn uniformly from [-1, 1] per agent and iteration.",
        bundle=ParamBundle(a=ONE, b=uniform(-1.0, 1.0), c=ZERO, theta=ZERO),
    ),
    _preset(
        "ACS", "Artificial cooperative search", "approximate",
        "Scale R approximated as U(0, 4)*U(-1, 1); the predator keys are not modelled.",
        bundle=ParamBundle(a=ONE, b=times(uniform(0.0, 4.0), uniform(-1.0, 1.0)), c=ZERO, theta=ZERO),
    ),
    _preset(
        "CSS", "Charged system search", "approximate",
        "A(R) taken as the normalized partner distance R (linear force inside the charged sphere).",
        bundle=ParamBundle(a=ONE, b=ParamValue("normalized_distance", ("partner",)), c=ZERO, theta=ZERO),
    ),
    _preset(
        "CS", "Cuckoo search", "exact",
        "Switch probability pa=0.25; local branch b=alpha*s with alpha=0.01 and Levy step s (beta=1.5); "
        "global branch is a Levy perturbation with theta=1.",
        branch=BranchRule(
            0.25,
            ParamBundle(a=ONE, b=times(0.01, ParamValue("levy_draw", (1.5,))), c=ZERO, theta=ZERO),
            ParamBundle(a=ONE, b=ZERO, c=ZERO, theta=ONE, noise="levy"),
        ),
    ),
    _preset(
        "GSA", "Gravitational search algorithm", "approximate",
        "G(t)=G0*exp(-alpha*t/T) with G0=100, alpha=20; masses are not modelled.",
        bundle=ParamBundle(
            a=ONE, b=times(uniform(0.0, 1.0), exponential(100.0, 20.0)), c=ONE, theta=ZERO,
            p=uniform(0.0, 1.0), q=ZERO, r=ZERO,
        ),
    ),
    _preset(
        "GEA", "Gradient evolution algorithm", "approximate",
        "Gradient-based b frozen to 0.5; jumping rate r_a=0.",
        bundle=ParamBundle(a=ONE, b=const(0.5), c=ZERO, theta=ZERO),
    ),
    _preset(
        "HHO", "Harris hawks optimizer", "approximate",
        "Escaping energy E decays linearly from 1 to 0 (E0=1).",
        bundle=ParamBundle(a=ONE, b=ZERO, c=ONE, theta=ZERO, p=ZERO, q=linear(-1.0, 0.0), r=ZERO),
    ),
    _preset(
        "HGSO", "Henry gas solubility optimization", "approximate",
        "q follows the Henry constant H(t) with H0=0.05, C_j=1, T0=298.15, T(t)=exp(-t/t_max); "
        "b is a uniform random number; solubility feedback is not modelled.",
        bundle=ParamBundle(
            a=ONE, b=uniform(0.0, 1.0), c=ONE, theta=ZERO, p=ONE,
            q=ParamValue("henry", (0.05, 1.0, 298.15)), r=ZERO,
        ),
    ),
    _preset(
        "HS", "Harmony search", "exact",
        "Pitch adjustment (rate 0.3): a=0, b=c=0, theta=1, h(x)=x; harmony selection: a=0, b=1, theta=0.",
        branch=BranchRule(
            0.3,
            ParamBundle(a=ZERO, b=ZERO, c=ZERO, theta=ONE, h_mode="identity_of_position"),
            ParamBundle(a=ZERO, b=ONE, c=ZERO, theta=ZERO),
        ),
    ),
    _preset(
        "ALO", "Ant lion optimizer", "approximate",
        "Random-walk range d_i-c_i shrinks linearly from 1 to 0; elite averaging of g* is not modelled.",
        bundle=ParamBundle(a=ONE, b=ZERO, c=ONE, theta=linear(1.0, 0.0), p=ZERO, q=ZERO, r=ONE),
    ),
    _preset(
        "WOA", "Whale optimization algorithm", "scheduled",
        "Encircling: b=-A with A=d*(2*rand-1), d decreasing linearly from 2 to 0; "
        "spiral (probability 0.5): theta=1, b=exp(R)*cos(2*pi*R).",
        branch=BranchRule(
            0.5,
            ParamBundle(
                a=ONE, b=times(-1.0, linear(2.0, 0.0), uniform(-1.0, 1.0)), c=ZERO, theta=ZERO,
            ),
            ParamBundle(a=ONE, b=ParamValue("spiral_draw", ()), c=ZERO, theta=ONE),
        ),
    ),
    _preset(
        "LOA", "Lion optimization algorithm", "approximate",
        "Hunting: q=-PI with PI ~ U(0, 1); nomad moves (probability 0.2): theta = D*R with D the partner "
        "distance and R ~ U(-1, 1). Pride structure is not modelled.",
        branch=BranchRule(
            0.2,
            ParamBundle(
                a=ONE, b=ZERO, c=ZERO,
                theta=times(ParamValue("distance", ("partner",)), uniform(-1.0, 1.0)),
            ),
            ParamBundle(a=ONE, b=ZERO, c=ONE, theta=ZERO, p=ZERO, q=times(-1.0, uniform(0.0, 1.0)), r=ZERO),
        ),
    ),
    _preset(
        "MOA", "Mayfly optimization algorithm", "exact",
        "Gravity g=0.8, a1=1, a2=1.5, visibility beta=2; q uses the distance to the personal best and "
        "r the distance to the global best.",
        bundle=ParamBundle(
            a=ONE, b=ZERO, c=ONE, theta=ZERO, p=const(0.8),
            q=ParamValue("distance_kernel", ("personal_best", 1.0, 2.0)),
            r=ParamValue("distance_kernel", ("global_best", 1.5, 2.0)),
        ),
    ),
    _preset(
        "BBBC", "Big bang-big crunch", "scheduled",
        "Moves around the population centre (a=0) with theta=Ub/t_max per coordinate.",
        bundle=ParamBundle(a=ZERO, b=ZERO, c=ZERO, theta=ParamValue("upper_bound_ratio", ())),
    ),
    _preset(
        "SSA", "Social spider algorithm", "approximate",
        "b=w*exp(-d_ij**2) with w=1; the growing exponent e^{+d^2} would overflow and is sign-flipped. "
        "zeta=rand-1/2.",
        bundle=ParamBundle(
            a=ONE, b=ParamValue("distance_kernel", ("partner", 1.0, 1.0)), c=ZERO, theta=ONE,
            noise="uniform_centered",
        ),
    ),
    _preset(
        "MSA", "Moth search algorithm", "scheduled",
        "Straight flight: a=lambda ~ U(0, 1), q=phi=0.618, c=1; Levy flight (probability 0.5): "
        "theta=S_max/t**2 with S_max=1 and Levy perturbation.",
        branch=BranchRule(
            0.5,
            ParamBundle(a=ONE, b=ZERO, c=ZERO, theta=ParamValue("inverse_square", (1.0,)), noise="levy"),
            ParamBundle(a=uniform(0.0, 1.0), b=ZERO, c=ONE, theta=ZERO, p=ZERO, q=const(0.618), r=ZERO),
        ),
    ),
    _preset(
        "MVO", "Multi-verse optimizer", "scheduled",
        "theta=1-(t/t_max)**(1/p) with p=6; zeta=+-[Lb+rand*(Ub-Lb)].",
        bundle=ParamBundle(
            a=ONE, b=ZERO, c=ZERO, theta=ParamValue("power_decay", (6.0,)), noise="signed_box",
        ),
    ),
    _preset(
        "WCA", "Water cycle algorithm", "exact",
        "Flow: b=C*rand with C=2; new-stream search (probability 0.1): theta=sqrt(mu) with mu=0.1 and "
        "Gaussian zeta of unit mean.",
        branch=BranchRule(
            0.1,
            ParamBundle(a=ONE, b=ZERO, c=ZERO, theta=const(math.sqrt(0.1)), noise="normal_unit_mean"),
            ParamBundle(a=ONE, b=times(2.0, uniform(0.0, 1.0)), c=ZERO, theta=ZERO),
        ),
    ),
]

REGISTRY: Dict[str, PresetSpec] = {p.name: p for p in _PRESETS}


def list_presets() -> List[str]:
    return list(REGISTRY)


def get_preset(preset: Union[PresetSpec, str, None]) -> PresetSpec:
    if preset is None:
        return GEM_DEFAULT
    if isinstance(preset, PresetSpec):
        return preset
    key = str(preset)
    if key.upper() == GEM_DEFAULT.name:
        return GEM_DEFAULT
    for name, spec in REGISTRY.items():
        if name.upper() == key.upper():
            return spec
    raise ConfigurationError(f"unknown preset {preset!r}; choose from {', '.join(REGISTRY)} or GEM")


def parse_param_value(text: str) -> ParamValue:
    """``"0.7"`` is a constant and ``"0.97^t"`` a geometric schedule."""
    text = text.strip()
    try:
        if text.endswith("^t"):
            return geometric(float(text[:-2]))
        return const(float(text))
    except ValueError:
        raise ConfigurationError(f"cannot parse parameter value {text!r}") from None


def custom_preset(overrides: Mapping[str, Union[str, float, ParamValue]], base: Optional[PresetSpec] = None) -> PresetSpec:
    """Preset built from the default settings with some coefficients replaced."""
    base = base or GEM_DEFAULT
    if base.bundle is None:
        raise ConfigurationError("only single-rule presets can be overridden")
    changes: Dict[str, Any] = {}
    for key, value in overrides.items():
        if key not in COEFFICIENTS:
            raise ConfigurationError(f"unknown parameter {key!r}; expected one of {', '.join(COEFFICIENTS)}")
        if isinstance(value, ParamValue):
            changes[key] = value
        elif isinstance(value, str):
            changes[key] = parse_param_value(value)
        else:
            changes[key] = const(float(value))
    text = ", ".join(f"{k}={v}" for k, v in overrides.items())
    return replace(base, name="custom", bundle=replace(base.bundle, **changes), notes=f"{base.name} with {text}")


def registry_to_json(presets: Optional[List[PresetSpec]] = None) -> str:
    records = [p.to_dict() for p in (presets if presets is not None else _PRESETS)]
    return json.dumps({"presets": records}, indent=2) + "\n"


def registry_from_json(text: str) -> List[PresetSpec]:
    return [PresetSpec.from_dict(rec) for rec in json.loads(text)["presets"]]
