import numpy as np
import pytest

from solver.benchmarks import rastrigin, sphere
from solver.swarm import (
    HyperParams,
    HyperParamsError,
    Particle,
    SwarmError,
    SwarmState,
    draw_coefficients,
    init_swarm,
    momentum_closed_form,
    momentum_update,
    optimize,
    step,
    uniform_bounds,
)


def _hyper(dim, **kwargs):
    kwargs.setdefault("init_bounds", uniform_bounds(-5.0, 5.0, dim))
    return HyperParams(**kwargs)


def _single_particle_state(x, v, m, p, g, fitness=sphere):
    particle = Particle(np.array(x), np.array(v), np.array(m), np.array(p), fitness(np.array(p)))
    return SwarmState(particles=(particle,), gbest_position=np.array(g), gbest_fitness=fitness(np.array(g)))


class TestHyperParams:
    def test_defaults(self):
        hyper = HyperParams()
        assert (hyper.beta, hyper.c1, hyper.c2, hyper.swarm_size) == (0.9, 0.8, 0.9, 50)

    @pytest.mark.parametrize("beta", [0.0, 1.0, 1.2, -0.1])
    def test_beta_outside_open_interval(self, beta):
        with pytest.raises(HyperParamsError, match="stable"):
            HyperParams(beta=beta)

    def test_coefficient_sum_above_two(self):
        with pytest.raises(HyperParamsError, match="stable"):
            HyperParams(c1=1.5, c2=1.0)

    def test_allow_unsafe_accepts_large_sum(self):
        assert HyperParams(c1=1.5, c2=1.0, allow_unsafe=True).c1 == 1.5

    @pytest.mark.parametrize("kwargs", [{"swarm_size": 0}, {"max_iters": 0}, {"workers": 0}, {"seed": -1}])
    def test_counts_must_be_positive(self, kwargs):
        with pytest.raises(HyperParamsError):
            HyperParams(**kwargs)

    def test_reversed_bounds(self):
        with pytest.raises(HyperParamsError):
            HyperParams(init_bounds=((1.0, -1.0),))


class TestInitSwarm:
    def test_single_particle_is_global_best(self):
        state = init_swarm(_hyper(3, swarm_size=1), 3, sphere)
        p = state.particles[0]
        assert np.array_equal(state.gbest_position, p.position)
        assert state.gbest_fitness == p.pbest_fitness == sphere(p.position)

    def test_global_best_is_minimum(self):
        state = init_swarm(_hyper(4), 4, sphere)
        assert all(state.gbest_fitness <= p.pbest_fitness for p in state.particles)

    def test_positions_inside_bounds_and_zero_motion(self):
        hyper = HyperParams(init_bounds=((0.0, 1.0), (10.0, 20.0)))
        state = init_swarm(hyper, 2, sphere)
        for p in state.particles:
            assert 0.0 <= p.position[0] <= 1.0
            assert 10.0 <= p.position[1] <= 20.0
            assert not p.velocity.any() and not p.momentum.any()
        assert state.evaluations == 50

    def test_deterministic(self):
        a = init_swarm(_hyper(5), 5, sphere)
        b = init_swarm(_hyper(5), 5, sphere)
        for pa, pb in zip(a.particles, b.particles):
            assert np.array_equal(pa.position, pb.position)
        assert a.gbest_fitness == b.gbest_fitness

    def test_bounds_dimension_mismatch(self):
        with pytest.raises(SwarmError):
            init_swarm(_hyper(3), 4, sphere)

    def test_non_finite_initial_fitness_becomes_inf(self):
        state = init_swarm(_hyper(2, swarm_size=3), 2, lambda x: float("nan"))
        assert all(p.pbest_fitness == float("inf") for p in state.particles)


class TestMomentum:
    def test_update_examples(self):
        np.testing.assert_allclose(momentum_update([0.0], [1.0], 0.9), [0.1])
        np.testing.assert_allclose(momentum_update([0.1], [1.0], 0.9), [0.19])

    def test_closed_form_examples(self):
        np.testing.assert_allclose(momentum_closed_form([[1.0], [1.0]], 0.9), [0.19])
        np.testing.assert_allclose(momentum_closed_form([[2.0]], 0.5), [1.0])

    def test_closed_form_matches_recurrence(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            beta = rng.uniform(0.01, 0.99)
            history = rng.normal(size=(rng.integers(1, 30), 3))
            m = np.zeros(3)
            for v in history:
                m = momentum_update(m, v, beta)
            np.testing.assert_allclose(momentum_closed_form(history, beta), m, rtol=0, atol=1e-12)

    def test_closed_form_needs_history(self):
        with pytest.raises(ValueError):
            momentum_closed_form([], 0.9)


class TestStep:
    def test_particle_at_rest_on_both_bests_stays(self):
        hyper = _hyper(1, swarm_size=1)
        state = _single_particle_state([0.3], [0.0], [0.0], [0.3], [0.3])
        moved = step(state, hyper, sphere)
        assert moved.particles[0].position[0] == 0.3
        assert moved.iteration == 1

    def test_hand_traced_update(self):
        hyper = _hyper(1, swarm_size=1, seed=42)
        state = _single_particle_state([1.0], [0.5], [0.2], [0.4], [-0.3])
        r1, r2 = draw_coefficients(42, 0, 1, 1)

        momentum = 0.9 * 0.2 + 0.1 * 0.5
        velocity = momentum + 0.8 * r1[0] * (0.4 - 1.0) + 0.9 * r2[0] * (-0.3 - 1.0)
        moved = step(state, hyper, sphere).particles[0]

        assert moved.momentum[0] == pytest.approx(momentum, abs=1e-15)
        assert moved.velocity[0] == pytest.approx(velocity, abs=1e-15)
        assert moved.position[0] == pytest.approx(1.0 + velocity, abs=1e-15)

    def test_bests_never_worsen(self):
        hyper = _hyper(3, swarm_size=10)
        state = init_swarm(hyper, 3, sphere)
        for _ in range(20):
            moved = step(state, hyper, sphere)
            assert moved.gbest_fitness <= state.gbest_fitness
            for before, after in zip(state.particles, moved.particles):
                assert after.pbest_fitness <= before.pbest_fitness
            state = moved

    def test_non_finite_candidates_are_rejected(self):
        calls = {"n": 0}

        def fitness(x):
            calls["n"] += 1
            return sphere(x) if calls["n"] <= 5 else float("nan")

        hyper = _hyper(2, swarm_size=5)
        state = init_swarm(hyper, 2, fitness)
        moved = step(state, hyper, fitness)
        for before, after in zip(state.particles, moved.particles):
            assert np.array_equal(after.pbest_position, before.pbest_position)
        assert moved.gbest_fitness == state.gbest_fitness

    def test_vanishing_beta_reduces_to_plain_pso(self):
        hyper = _hyper(3, swarm_size=5, beta=1e-12)
        state = init_swarm(hyper, 3, sphere)
        for _ in range(3):
            state = step(state, hyper, sphere)

        moved = step(state, hyper, sphere)
        for i, (before, after) in enumerate(zip(state.particles, moved.particles)):
            r1, r2 = draw_coefficients(hyper.seed, i, state.iteration + 1, 3)
            velocity = (before.velocity
                        + hyper.c1 * r1 * (before.pbest_position - before.position)
                        + hyper.c2 * r2 * (state.gbest_position - before.position))
            np.testing.assert_allclose(after.position, before.position + velocity, atol=1e-9)


class TestOptimize:
    def test_sphere_converges(self):
        result = optimize(_hyper(5, max_iters=500), 5, sphere)
        assert result.best_fitness <= 1e-3
        assert result.best_fitness == sphere(result.best_position)

    def test_single_iteration_history(self):
        result = optimize(_hyper(2, max_iters=1), 2, sphere)
        assert len(result.history) == 1

    def test_history_non_increasing(self):
        history = optimize(_hyper(3, max_iters=100), 3, sphere).history
        assert all(b <= a for a, b in zip(history, history[1:]))

    def test_deterministic_for_fixed_seed(self):
        a = optimize(_hyper(3, max_iters=50, seed=9), 3, sphere)
        b = optimize(_hyper(3, max_iters=50, seed=9), 3, sphere)
        assert a.history == b.history
        assert np.array_equal(a.best_position, b.best_position)

    def test_parallel_matches_serial(self):
        serial = optimize(_hyper(4, max_iters=30, seed=3), 4, sphere)
        parallel = optimize(_hyper(4, max_iters=30, seed=3, workers=4), 4, sphere)
        assert serial.history == parallel.history
        assert np.array_equal(serial.best_position, parallel.best_position)

    @pytest.mark.parametrize("swarm_size", [10, 20])
    def test_evaluation_count(self, swarm_size):
        result = optimize(_hyper(2, swarm_size=swarm_size, max_iters=5), 2, sphere)
        assert result.state.evaluations == swarm_size * 6

    def test_early_stop(self):
        result = optimize(_hyper(2, max_iters=100, early_stop_window=5, early_stop_tol=1e9), 2, sphere)
        assert len(result.history) == 6
        assert result.state.iteration == 6

    def test_callback_sees_every_iteration(self):
        seen = []
        optimize(_hyper(2, max_iters=7), 2, sphere, callback=lambda s: seen.append(s.iteration))
        assert seen == list(range(1, 8))

    @pytest.mark.slow
    def test_rastrigin_two_dimensions(self):
        hyper = _hyper(2, max_iters=2000, init_bounds=uniform_bounds(-5.12, 5.12, 2))
        assert optimize(hyper, 2, rastrigin).best_fitness <= 1.0


def test_package_exports_resolve():
    import solver

    missing = [name for name in solver.__all__ if not hasattr(solver, name)]
    assert missing == []
    assert solver.optimize is optimize
