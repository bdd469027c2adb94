import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gem.engineering import (
    LatticeConstraint,
    engineering_names,
    evaluate_constraints,
    get_engineering_problem,
    penalized_objective,
    repair,
)
from gem.errors import ConfigurationError, EvaluationError

SLACK = {"spring": 1e-3, "truss3bar": 1e-4, "beam": 1e-4, "pressure_vessel": 1e-3}


@pytest.mark.parametrize("name", engineering_names())
def test_best_known_point_feasible(name):
    problem = get_engineering_problem(name)
    x = problem.best_known_point
    assert problem.bounds.contains(x)
    g = evaluate_constraints(problem, x)
    assert len(g) == problem.n_constraints
    assert max(g) <= SLACK[name]


@pytest.mark.parametrize("name", engineering_names())
def test_best_known_value(name):
    problem = get_engineering_problem(name)
    f = float(problem.objective(problem.best_known_point))
    assert f == pytest.approx(problem.best_known_value, rel=1e-4)


def test_spring_printed_point():
    problem = get_engineering_problem("spring")
    x = np.array([0.05169, 0.35673, 11.2885])
    assert float(problem.objective(x)) == pytest.approx(0.012665, abs=1e-5)
    # rounding to 5 digits leaves g1 about 1e-5 above zero, which the penalty charges
    g1 = evaluate_constraints(problem, x)[0]
    assert 0 < g1 < 1e-4
    assert penalized_objective(problem, x) == pytest.approx(float(problem.objective(x)) + 1000 * g1, rel=1e-12)


def test_vessel_point_lies_on_lattice():
    problem = get_engineering_problem("pressure_vessel")
    np.testing.assert_array_equal(repair(problem, problem.best_known_point), problem.best_known_point)
    assert problem.penalty_lambda == 1e5


def test_beam_penalty_arithmetic():
    problem = get_engineering_problem("beam")
    # choose x with sum(c/x**3) = 1.1, i.e. g = 0.1
    x = np.full(5, (125.0 / 1.1) ** (1 / 3))
    g = evaluate_constraints(problem, x)[0]
    assert g == pytest.approx(0.1, rel=1e-12)
    expected = float(problem.objective(x)) + 1000 * g
    assert penalized_objective(problem, x) == pytest.approx(expected, rel=1e-12)


def test_division_by_zero_names_constraint():
    problem = get_engineering_problem("spring")
    with pytest.raises(EvaluationError, match="g1"):
        evaluate_constraints(problem, [0.0, 0.5, 5.0])


def test_undefined_constraint_is_infinite_violation():
    problem = get_engineering_problem("truss3bar")
    assert problem.evaluate(np.zeros((1, 2)))[0] == np.inf


@pytest.mark.parametrize(
    "x1, expected", [(0.80, 0.8125), (0.8125, 0.8125), (0.01, 0.0625), (50.0, 99 * 0.0625)]
)
def test_lattice_examples(x1, expected):
    problem = get_engineering_problem("pressure_vessel")
    out = repair(problem, [x1, 0.5, 40.0, 100.0])
    assert out[0] == expected
    assert out[2] == 40.0 and out[3] == 100.0


def test_lambda_override():
    assert get_engineering_problem("beam", penalty_lambda=5.0).penalty_lambda == 5.0
    with pytest.raises(ConfigurationError):
        get_engineering_problem("beam", penalty_lambda=-1.0)
    with pytest.raises(ConfigurationError):
        get_engineering_problem("bridge")


points = st.lists(st.floats(0.0, 10.0), min_size=4, max_size=4)


@settings(max_examples=200, deadline=None)
@given(points)
def test_repair_idempotent_and_closed(x):
    problem = get_engineering_problem("pressure_vessel")
    once = repair(problem, x)
    np.testing.assert_array_equal(repair(problem, once), once)
    k = once[:2] / 0.0625
    assert np.all(k == np.round(k)) and np.all((1 <= k) & (k <= 99))
    np.testing.assert_array_equal(once[2:], x[2:])


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(engineering_names()), st.data())
def test_penalty_consistency(name, data):
    problem = get_engineering_problem(name)
    lo, hi = problem.bounds.lower, problem.bounds.upper
    u = np.array(data.draw(st.lists(st.floats(0.01, 1.0), min_size=problem.dimension, max_size=problem.dimension)))
    x = lo + u * (hi - lo)
    f = float(problem.objective(x))
    fp = penalized_objective(problem, x)
    g = np.array(evaluate_constraints(problem, x))
    assert fp >= f
    if g.max() <= 0:
        assert fp == f
    elif problem.penalty_lambda * g.max() > 1e-9 * abs(f):
        assert fp > f


def test_lattice_constraint_direct():
    lc = LatticeConstraint(indices=(1,), step=0.5, min_mult=2, max_mult=4)
    np.testing.assert_array_equal(lc.apply([[7.3, 0.1], [7.3, 1.6]]), [[7.3, 1.0], [7.3, 1.5]])
