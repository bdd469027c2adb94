import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gem.errors import ConfigurationError
from gem.ode_fit import (
    MEASURED_VALUES,
    OdeFitProblem,
    OdeParams,
    analytic_step_response,
    sample_at_integer_times,
    simulate_step_response,
    sse_objective,
    step_response_batch,
)

TRUTH = OdeParams(0.25, 2.0)
T = np.arange(1, 11, dtype=float)


def _max_error(dt):
    y = sample_at_integer_times(TRUTH, 10, dt)
    return float(np.max(np.abs(y[1:] - analytic_step_response(TRUTH, T))))


def test_data_table():
    assert MEASURED_VALUES.tolist() == [
        0.0, 1.0706, 1.3372, 0.8277, 0.9507, 1.0848, 0.9814, 0.9769, 1.0169, 1.0012, 0.9933,
    ]
    with pytest.raises(ValueError):
        MEASURED_VALUES[1] = 0.0


def test_initial_condition_and_steady_state():
    t, y = simulate_step_response(TRUTH, 40.0, 0.01)
    assert y[0] == 0.0 and t[-1] == pytest.approx(40.0)
    assert abs(y[-1] - 1.0) < 1e-6


def test_rk4_matches_closed_form():
    assert _max_error(0.01) <= 1e-6


def test_convergence_order():
    factor = _max_error(0.1) / _max_error(0.05)
    assert 8 <= factor <= 32


def test_analytic_examples():
    assert analytic_step_response(OdeParams(0.3, 1.7), 0.0) == 0.0
    assert analytic_step_response(OdeParams(0.0, 1.0), math.pi) == pytest.approx(2.0, abs=1e-15)
    y_fine = sample_at_integer_times(TRUTH, 1, 1e-3)[1]
    assert abs(analytic_step_response(TRUTH, 1.0) - y_fine) <= 1e-6
    with pytest.raises(ConfigurationError):
        analytic_step_response(OdeParams(1.0, 1.0), 1.0)


def test_sse_landmarks():
    # oracle values from the closed form: 7.3336e-9 and 2.4445
    assert sse_objective(TRUTH) == pytest.approx(7.3336e-9, rel=1e-3)
    assert sse_objective(OdeParams(0.9, 0.5)) > 0.1


def test_zero_residual_on_own_simulation():
    from gem.ode_fit import VibrationData

    y = sample_at_integer_times(OdeParams(0.4, 1.3))
    assert sse_objective(OdeParams(0.4, 1.3), VibrationData(np.arange(11.0), y)) == 0.0


def test_invalid_inputs():
    with pytest.raises(ConfigurationError):
        OdeParams(0.2, 0.0)
    with pytest.raises(ConfigurationError):
        OdeParams(-0.1, 1.0)
    with pytest.raises(ConfigurationError):
        simulate_step_response(TRUTH, 10.0, 0.0)
    with pytest.raises(ConfigurationError):
        simulate_step_response(TRUTH, 10.0, 0.03)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 0.99), st.floats(0.1, 5.0))
def test_batch_equals_stepwise(zeta, omega):
    stepwise = sample_at_integer_times(OdeParams(zeta, omega))
    batch = step_response_batch([zeta], [omega])[0]
    np.testing.assert_allclose(batch, stepwise, rtol=0, atol=1e-11)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 0.99), st.floats(0.1, 5.0))
def test_objective_finite_non_negative(zeta, omega):
    value = OdeFitProblem().evaluate(np.array([zeta, omega]))
    assert np.isfinite(value) and value >= 0


def test_problem_wrapper_matches_sse():
    X = np.array([[0.25, 2.0], [0.5, 1.0]])
    got = OdeFitProblem().evaluate(X)
    want = [sse_objective(OdeParams(*x)) for x in X]
    np.testing.assert_allclose(got, want, rtol=1e-6, atol=1e-14)
