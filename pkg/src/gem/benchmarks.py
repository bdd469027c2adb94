"""Analytic test functions f1-f10 with bounds and known optima.

Every function accepts a single point of shape ``(D,)`` or a batch of shape
``(..., D)`` and reduces over the last axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .engine import Bounds
from .errors import ConfigurationError


def sphere(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x**2, axis=-1)


def rosenbrock(x):
    # Only the first coordinate carries the (x - 1)**2 term in this variant.
    x = np.asarray(x, dtype=float)
    return (x[..., 0] - 1) ** 2 + 100 * np.sum((x[..., 1:] - x[..., :-1] ** 2) ** 2, axis=-1)


def ackley(x):
    x = np.asarray(x, dtype=float)
    return (
        -20 * np.exp(-0.2 * np.sqrt(np.mean(x**2, axis=-1)))
        - np.exp(np.mean(np.cos(2 * np.pi * x), axis=-1))
        + 20
        + np.e
    )


def dixon_price(x):
    x = np.asarray(x, dtype=float)
    i = np.arange(2, x.shape[-1] + 1)
    return (x[..., 0] - 1) ** 2 + np.sum(i * (2 * x[..., 1:] ** 2 - x[..., :-1]) ** 2, axis=-1)


def schwefel_2d(x):
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    return -x1 * x2 * (72 - 2 * x1 - 2 * x2)


def booth(x):
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    return (x1 + 2 * x2 - 7) ** 2 + (2 * x1 + x2 - 5) ** 2


def holder_table(x):
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    return -np.abs(np.sin(x1) * np.cos(x2) * np.exp(np.abs(1 - np.sqrt(x1**2 + x2**2) / np.pi)))


def beale(x):
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    return (
        (1.5 - x1 + x1 * x2) ** 2
        + (2.25 - x1 + x1 * x2**2) ** 2
        + (2.625 - x1 + x1 * x2**3) ** 2
    )


def trid(x):
    x = np.asarray(x, dtype=float)
    return np.sum((x - 1) ** 2, axis=-1) - np.sum(x[..., 1:] * x[..., :-1], axis=-1)


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return 10 * x.shape[-1] + np.sum(x**2 - 10 * np.cos(2 * np.pi * x), axis=-1)


def _dixon_price_argmin(D: int) -> List[np.ndarray]:
    i = np.arange(1, D + 1)
    return [2.0 ** (-(2.0**i - 2) / 2.0**i)]


def _trid_argmin(D: int) -> List[np.ndarray]:
    i = np.arange(1, D + 1)
    return [(i * (D + 1 - i)).astype(float)]


def _holder_argmin(D: int) -> List[np.ndarray]:
    return [np.array([s1 * 8.05502, s2 * 9.66459]) for s1 in (1, -1) for s2 in (1, -1)]


@dataclass(frozen=True)
class BenchmarkFunction:
    """A test function bound to a dimension, its box and its known optimum."""

    name: str
    func: Callable
    dimension: int
    bounds: Bounds
    known_min_value: float
    known_argmin: Tuple[np.ndarray, ...]
    tolerance: float = 1e-9
    fixed_dimension: bool = False

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dimension:
            raise ConfigurationError(
                f"{self.name} expects dimension {self.dimension}, got {x.shape[-1]}"
            )
        return self.func(x)

    def __call__(self, x):
        return self.evaluate(x)


@dataclass(frozen=True)
class _Entry:
    name: str
    func: Callable
    default_dimension: int
    box: Callable[[int], Tuple[float, float]]
    known_min: Callable[[int], float]
    argmin: Callable[[int], List[np.ndarray]]
    fixed_dimension: bool = False
    tolerance: float = 1e-9


def _const_box(lo, hi):
    return lambda D: (lo, hi)


def _zeros(D):
    return [np.zeros(D)]


_ENTRIES: Dict[str, _Entry] = {
    "f1": _Entry("sphere", sphere, 5, _const_box(-10.0, 10.0), lambda D: 0.0, _zeros),
    "f2": _Entry("rosenbrock", rosenbrock, 5, _const_box(-10.0, 10.0), lambda D: 0.0, lambda D: [np.ones(D)]),
    "f3": _Entry("ackley", ackley, 5, _const_box(-32.768, 32.768), lambda D: 0.0, _zeros),
    "f4": _Entry("dixonprice", dixon_price, 5, _const_box(-10.0, 10.0), lambda D: 0.0, _dixon_price_argmin),
    "f5": _Entry(
        "schwefel2d", schwefel_2d, 2, _const_box(0.0, 500.0), lambda D: -3456.0,
        lambda D: [np.array([12.0, 12.0])], fixed_dimension=True,
    ),
    "f6": _Entry(
        "booth", booth, 2, _const_box(-10.0, 10.0), lambda D: 0.0,
        lambda D: [np.array([1.0, 3.0])], fixed_dimension=True,
    ),
    "f7": _Entry(
        "holdertable", holder_table, 2, _const_box(-10.0, 10.0), lambda D: -19.2085,
        _holder_argmin, fixed_dimension=True, tolerance=1e-4,
    ),
    "f8": _Entry(
        "beale", beale, 2, _const_box(-4.5, 4.5), lambda D: 0.0,
        lambda D: [np.array([3.0, 0.5])], fixed_dimension=True,
    ),
    "f9": _Entry(
        "trid", trid, 4, lambda D: (-float(D * D), float(D * D)),
        lambda D: -D * (D + 4) * (D - 1) / 6.0, _trid_argmin,
    ),
    "f10": _Entry("rastrigin", rastrigin, 5, _const_box(-5.12, 5.12), lambda D: 0.0, _zeros),
}

ALIASES: Dict[str, str] = {entry.name: key for key, entry in _ENTRIES.items()}


def benchmark_names() -> List[str]:
    return list(_ENTRIES)


def _key(name: str) -> str:
    key = name.lower()
    key = ALIASES.get(key, key)
    if key not in _ENTRIES:
        raise ConfigurationError(f"unknown benchmark {name!r}")
    return key


def is_benchmark(name: str) -> bool:
    try:
        _key(name)
    except ConfigurationError:
        return False
    return True


def get_benchmark(name: str, dimension: Optional[int] = None) -> BenchmarkFunction:
    key = _key(name)
    entry = _ENTRIES[key]
    D = entry.default_dimension if dimension is None else int(dimension)
    if entry.fixed_dimension and D != entry.default_dimension:
        raise ConfigurationError(f"{key} ({entry.name}) is defined for D={entry.default_dimension} only")
    if D < 1 or (key in ("f2", "f4", "f9") and D < 2):
        raise ConfigurationError(f"dimension {D} is too small for {key}")
    lo, hi = entry.box(D)
    return BenchmarkFunction(
        name=key,
        func=entry.func,
        dimension=D,
        bounds=Bounds.uniform(lo, hi, D),
        known_min_value=float(entry.known_min(D)),
        known_argmin=tuple(entry.argmin(D)),
        tolerance=entry.tolerance,
        fixed_dimension=entry.fixed_dimension,
    )


def evaluate_benchmark(name: str, x) -> float:
    x = np.asarray(x, dtype=float)
    return float(get_benchmark(name, x.shape[-1]).evaluate(x))


def known_optimum(name: str, dimension: Optional[int] = None) -> Tuple[float, List[np.ndarray]]:
    bench = get_benchmark(name, dimension)
    return bench.known_min_value, [p.copy() for p in bench.known_argmin]
