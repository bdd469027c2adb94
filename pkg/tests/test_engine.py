import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gem.benchmarks import get_benchmark
from gem.engine import (
    Bounds,
    GemParams,
    SwarmState,
    centroid_top_m,
    clamp_to_bounds,
    derive_seed,
    draw_partners,
    greedy_select,
    initialize_population,
    position_update,
    run_gem,
    update_global_best,
    velocity_update,
)
from gem.errors import ConfigurationError, EvaluationError

BOX = Bounds([-10.0, -10.0], [10.0, 10.0])


def _state(positions, values, **kw):
    positions = np.asarray(positions, dtype=float)
    values = np.asarray(values, dtype=float)
    base = dict(
        positions=positions,
        velocities=np.zeros_like(positions),
        values=values,
        personal_best=positions.copy(),
        personal_best_values=values.copy(),
        global_best=positions[0].copy(),
        global_best_value=np.inf,
        centroid=positions.mean(axis=0),
    )
    base.update(kw)
    return SwarmState(**base)


def _sum_evaluate(X):
    return np.sum(X, axis=-1)


class TestBounds:
    def test_rejects_inverted(self):
        with pytest.raises(ConfigurationError):
            Bounds([1.0], [0.0])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ConfigurationError):
            Bounds([0.0, 0.0], [1.0])

    def test_read_only(self):
        with pytest.raises(ValueError):
            BOX.lower[0] = 3.0


class TestInitialize:
    @pytest.mark.parametrize(
        "u, expected", [((0, 0), (-10, -10)), ((1, 1), (10, 10)), ((0.5, 0.5), (0, 0))]
    )
    def test_forced_draws(self, u, expected):
        state = initialize_population(BOX, 1, np.random.default_rng(0), _sum_evaluate, u=[u])
        np.testing.assert_array_equal(state.positions[0], expected)

    def test_initial_state(self):
        state = initialize_population(BOX, 6, np.random.default_rng(1), _sum_evaluate)
        assert np.all(state.velocities == 0)
        np.testing.assert_array_equal(state.personal_best, state.positions)
        assert state.iteration == 0
        assert state.global_best_value == state.values.min()
        assert BOX.contains(state.positions)

    def test_dimension_mismatch(self):
        with pytest.raises(ConfigurationError):
            initialize_population(BOX, 3, np.random.default_rng(0), _sum_evaluate, dimension=3)


class TestCentroid:
    def test_identical_points(self):
        state = _state([[1.5, -2.0]] * 4, [3, 1, 2, 0])
        for m in range(1, 5):
            np.testing.assert_array_equal(centroid_top_m(state, m), [1.5, -2.0])

    def test_two_points(self):
        state = _state([[0, 0], [2, 2]], [1, 2])
        np.testing.assert_array_equal(centroid_top_m(state, 2), [1, 1])
        np.testing.assert_array_equal(centroid_top_m(state, 1), [0, 0])

    def test_tie_break_lower_index(self):
        state = _state([[5, 5], [1, 1], [3, 3]], [0.0, 0.0, 0.0])
        np.testing.assert_array_equal(centroid_top_m(state, 1), [5, 5])

    def test_out_of_range(self):
        state = _state([[0, 0], [2, 2]], [1, 2])
        for m in (0, 3):
            with pytest.raises(ConfigurationError):
                centroid_top_m(state, m)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 12), st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_full_centroid_is_mean(self, n, D, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(scale=100, size=(n, D))
        state = _state(x, rng.random(n))
        c = centroid_top_m(state, n)
        np.testing.assert_allclose(c, x.sum(axis=0) / n, rtol=1e-12, atol=1e-12 * np.abs(x).max())


class TestGlobalBest:
    def test_strict_improvement(self):
        state = _state([[0, 0], [1, 1]], [7, 3], global_best_value=5.0)
        update_global_best(state)
        assert state.global_best_value == 3
        np.testing.assert_array_equal(state.global_best, [1, 1])

    def test_no_improvement_keeps_best(self):
        g = np.array([9.0, 9.0])
        state = _state([[0, 0], [1, 1]], [5, 6], global_best=g.copy(), global_best_value=5.0)
        update_global_best(state)
        assert state.global_best_value == 5
        np.testing.assert_array_equal(state.global_best, g)

    def test_tie_goes_to_lower_index(self):
        state = _state([[4, 4], [1, 1], [2, 2]], [3, 1, 1])
        update_global_best(state)
        np.testing.assert_array_equal(state.global_best, [1, 1])

    def test_personal_best_counts(self):
        state = _state([[0, 0], [1, 1]], [4, 6])
        state.personal_best[1] = [7, 7]
        state.personal_best_values[1] = 2
        update_global_best(state)
        assert state.global_best_value == 2
        np.testing.assert_array_equal(state.global_best, [7, 7])

    def test_centroid_candidate(self):
        state = _state([[-1, -1], [1, 1]], [2, 2])
        update_global_best(state, evaluate_centroid=lambda c: float(np.sum(c**2)))
        assert state.global_best_value == 0
        np.testing.assert_array_equal(state.global_best, [0, 0])


class TestVelocity:
    def test_all_zero_coefficients(self):
        v = velocity_update([3, -1], [1, 2], [0, 0], [5, 5], GemParams(p=0, q=0, r=0), np.random.default_rng(0))
        np.testing.assert_array_equal(v, [0, 0])

    def test_pure_attraction(self):
        v = velocity_update([0, 0], [1, 1], [1, 1], [3, 5], GemParams(p=0, q=1, r=0), eps1=1.0, eps2=0.0)
        np.testing.assert_array_equal(v, [2, 4])

    def test_worked_example(self):
        # hand oracle: 0.7*1 + 1*0.5*(2-0) + 1*0.5*(1-0) = 2.2
        v = velocity_update([1, 0], [0, 0], [1, 0], [2, 0], GemParams(p=0.7, q=1, r=1), eps1=0.5, eps2=0.5)
        np.testing.assert_allclose(v, [2.2, 0.0], rtol=0, atol=1e-15)

    def test_fresh_draws_per_coordinate(self):
        rng = np.random.default_rng(3)
        x = np.zeros((4, 3))
        v = velocity_update(x, x, x, np.ones(3), GemParams(p=0, q=1, r=0), rng)
        assert len(np.unique(v)) == v.size

    def test_uniform_epsilon_is_non_negative(self):
        rng = np.random.default_rng(3)
        x = np.zeros((50, 3))
        v = velocity_update(x, x, x, np.ones(3), GemParams(p=0, q=1, r=0), rng, epsilon="uniform")
        assert np.all((v >= 0) & (v < 1))


class TestPosition:
    def test_identity(self):
        out = position_update([3, 4], [9, 9], [0, 0], [5, 5], GemParams(a=1, b=0, c=0, theta=0))
        np.testing.assert_array_equal(out, [3, 4])

    def test_de_form(self):
        out = position_update([0, 0], [1, 2], [7, 7], [5, 5], GemParams(a=1, b=0.5, c=0, theta=0))
        np.testing.assert_array_equal(out, [0.5, 1])

    def test_centrality_midpoint(self):
        out = position_update([2, 2], [9, 9], [0, 0], [5, 5], GemParams(a=0.5, b=0, c=0, theta=0))
        np.testing.assert_array_equal(out, [1, 1])

    def test_identity_h_scales_noise(self):
        x = np.array([2.0, -3.0])
        params = GemParams(a=1, theta=0.5, h_mode="identity_of_position")
        out = position_update(x, x, x, x, params, zeta=np.array([1.0, 1.0]))
        np.testing.assert_array_equal(out, x + 0.5 * x)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.integers(1, 6))
    def test_de_reduction_any_seed(self, seed, F, D):
        rng = np.random.default_rng(seed)
        x, xj, cen, v = rng.normal(size=(4, D))
        out = position_update(x, xj, cen, v, GemParams(a=1, b=F, c=0, theta=0), rng)
        np.testing.assert_array_equal(out, x + F * (xj - x))

    def test_sa_reduction_is_standard_normal(self):
        rng = np.random.default_rng(11)
        x = np.full((20000, 1), 3.0)
        out = position_update(x, x, x, np.zeros_like(x), GemParams(a=1, b=0, c=0, theta=1), rng)
        step = (out - x).ravel()
        assert abs(step.mean()) < 0.05
        assert 0.9 <= step.var() <= 1.1

    def test_pso_reduction(self):
        x = np.array([[1.0, -2.0], [0.5, 0.5]])
        v = np.array([[0.1, 0.2], [-0.3, 0.0]])
        pbest = np.array([[0.0, 0.0], [1.0, 1.0]])
        g = np.array([2.0, 2.0])
        params = GemParams(a=1, b=0, c=1, theta=0, p=1, q=2, r=2)
        rng = np.random.default_rng(5)
        v_new = velocity_update(v, x, pbest, g, params, rng)
        out = position_update(x, x[::-1], x.mean(0), v_new, params, rng)
        # hand-written PSO step with the same draws
        ref_rng = np.random.default_rng(5)
        e1, e2 = ref_rng.standard_normal(x.shape), ref_rng.standard_normal(x.shape)
        v_ref = v + 2 * e1 * (g - x) + 2 * e2 * (pbest - x)
        np.testing.assert_allclose(out, x + v_ref, rtol=0, atol=1e-15)


class TestGreedy:
    def test_improvement(self):
        x, f = greedy_select([0, 0], 5.0, [1, 1], 3.0)
        assert f == 3.0 and list(x) == [1, 1]

    def test_rejection(self):
        x, f = greedy_select([0, 0], 3.0, [1, 1], 5.0)
        assert f == 3.0 and list(x) == [0, 0]

    def test_equal_accepts_new(self):
        x, f = greedy_select([0, 0], 4.0, [1, 1], 4.0)
        assert list(x) == [1, 1]

    def test_batch(self):
        x, f = greedy_select([[0, 0], [0, 0]], [1.0, 5.0], [[1, 1], [2, 2]], [2.0, 4.0])
        np.testing.assert_array_equal(x, [[0, 0], [2, 2]])
        np.testing.assert_array_equal(f, [1, 4])

    def test_nan(self):
        with pytest.raises(EvaluationError):
            greedy_select([0, 0], 1.0, [1, 1], float("nan"))


class TestClamp:
    @pytest.mark.parametrize("x, expected", [((15, 0), (10, 0)), ((3, -4), (3, -4)), ((-20, 20), (-10, 10))])
    def test_examples(self, x, expected):
        np.testing.assert_array_equal(clamp_to_bounds(x, BOX), expected)


class TestSeeds:
    def test_partners_differ_from_self(self):
        rng = np.random.default_rng(0)
        for n in (2, 3, 10):
            for _ in range(50):
                j = draw_partners(rng, n)
                assert np.all(j != np.arange(n)) and np.all((0 <= j) & (j < n))

    def test_derive_seed_distinct_and_stable(self):
        seeds = [derive_seed(2024, i) for i in range(100)]
        assert len(set(seeds)) == 100
        assert seeds[0] == derive_seed(2024, 0)
        assert derive_seed(2024, 0) != derive_seed(2025, 0)
        assert all(0 <= s < 2**64 for s in seeds)

    def test_negative_seed(self):
        with pytest.raises(ConfigurationError):
            derive_seed(-1, 0)


class TestRun:
    def test_t_max_zero_rejected(self):
        with pytest.raises(ConfigurationError):
            run_gem(get_benchmark("f1"), t_max=0, rng=0)

    def test_single_iteration(self):
        rec = run_gem(get_benchmark("f6"), n=5, t_max=1, rng=4)
        assert rec.history.shape == (1,) and rec.iterations == 1
        assert rec.evaluations == 5 * 2

    def test_evaluation_count(self):
        rec = run_gem(get_benchmark("f1"), n=7, t_max=30, rng=1)
        assert rec.evaluations == 7 * 31

    def test_determinism(self):
        a = run_gem(get_benchmark("f3"), "CS", n=8, t_max=60, rng=99)
        b = run_gem(get_benchmark("f3"), "CS", n=8, t_max=60, rng=99)
        assert a.best_value == b.best_value
        assert a.best_point.tobytes() == b.best_point.tobytes()
        assert a.history.tobytes() == b.history.tobytes()

    @pytest.mark.parametrize("preset", [None, "PSO", "HS", "WOA", "MVO", "BBBC"])
    def test_monotone_history_and_containment(self, preset):
        problem = get_benchmark("f10")
        seen = []

        def check(state):
            assert problem.bounds.contains(state.positions)
            assert state.global_best_value <= state.personal_best_values.min()
            seen.append(state.iteration)

        rec = run_gem(problem, preset, n=10, t_max=80, rng=7, callback=check)
        assert seen == list(range(1, 81))
        assert np.all(np.diff(rec.history) <= 0)
        assert rec.history[-1] == rec.best_value
        assert np.isfinite(rec.best_point).all()

    def test_nan_objective_aborts(self):
        class Broken:
            bounds = BOX

            def evaluate(self, X):
                out = np.sum(X**2, axis=-1)
                out[0] = np.nan
                return out

        with pytest.raises(EvaluationError, match="iteration 0"):
            run_gem(Broken(), t_max=3, rng=0)

    def test_centroid_flag_counts_evaluations(self):
        rec = run_gem(get_benchmark("f1"), n=5, t_max=10, rng=0, evaluate_centroid=True)
        assert rec.evaluations == 5 * 11 + 11

    def test_sphere_converges(self):
        rec = run_gem(get_benchmark("f1"), rng=derive_seed(2024, 0))
        assert rec.best_value <= 1e-10
