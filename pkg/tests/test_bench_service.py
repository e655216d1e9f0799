import pytest

from services.bench_service import MIN_BENCH_SEEDS, BenchError, bench_optimizer
from solver.swarm import HyperParams


def test_sphere_one_dimension():
    summary = bench_optimizer("sphere", 1, HyperParams(max_iters=100))
    assert summary.seeds == list(range(10))
    assert summary.median_best <= 1e-6


def test_evaluation_counts():
    summary = bench_optimizer("rosenbrock", 2, HyperParams(swarm_size=8, max_iters=10), n_seeds=12)
    assert summary.evaluations == [8 * 11] * 12
    assert len(summary.per_seed_best) == 12


def test_seeds_start_at_hyper_seed():
    summary = bench_optimizer("sphere", 2, HyperParams(swarm_size=5, max_iters=5, seed=7))
    assert summary.seeds == list(range(7, 17))


@pytest.mark.parametrize("n_seeds", [0, 1, MIN_BENCH_SEEDS - 1])
def test_too_few_seeds(n_seeds):
    with pytest.raises(BenchError, match="at least 10 seeds"):
        bench_optimizer("sphere", 2, HyperParams(max_iters=5), n_seeds=n_seeds)


def test_unknown_function():
    with pytest.raises(BenchError):
        bench_optimizer("ackley", 2, HyperParams(max_iters=5))


def test_invalid_dimension():
    with pytest.raises(BenchError):
        bench_optimizer("sphere", 0, HyperParams(max_iters=5))


@pytest.mark.slow
def test_sphere_five_dimensions_over_ten_seeds():
    summary = bench_optimizer("sphere", 5, HyperParams(max_iters=500), n_seeds=10)
    assert summary.median_best <= 1e-3


@pytest.mark.slow
def test_rastrigin_two_dimensions():
    summary = bench_optimizer("rastrigin", 2, HyperParams(max_iters=2000), n_seeds=10)
    assert summary.median_best <= 1.0
