"""
Optimizer benchmarks over standard test functions.

Validates the swarm independently of the network and problem layers by
running it over several seeds and summarizing the best values reached.
"""
import dataclasses
import logging
import statistics
from dataclasses import dataclass
from typing import List

from solver.benchmarks import BENCHMARKS
from solver.swarm import HyperParams, optimize, uniform_bounds

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

DEFAULT_BENCH_SEEDS = 10
# a median over fewer seeds is not reported
MIN_BENCH_SEEDS = 10


class BenchError(ValueError):
    """Custom exception for invalid benchmark requests"""
    pass


@dataclass(frozen=True)
class BenchSummary:
    function: str
    dim: int
    seeds: List[int]
    per_seed_best: List[float]
    median_best: float
    evaluations: List[int]


def bench_optimizer(function: str, dim: int, hyper: HyperParams,
                    n_seeds: int = DEFAULT_BENCH_SEEDS) -> BenchSummary:
    """
    Run the optimizer on a test function for n_seeds consecutive seeds.

    The init box is the function's conventional domain; any init_bounds in
    hyper are replaced.
    """
    if function not in BENCHMARKS:
        raise BenchError(f"Unknown benchmark '{function}', expected one of {sorted(BENCHMARKS)}")
    if dim < 1:
        raise BenchError(f"Benchmark dimension must be >= 1, got {dim}")
    if n_seeds < MIN_BENCH_SEEDS:
        raise BenchError(f"Benchmarks need at least {MIN_BENCH_SEEDS} seeds, got {n_seeds}")

    fn, (lo, hi) = BENCHMARKS[function]
    seeds = [hyper.seed + i for i in range(n_seeds)]
    best, evaluations = [], []
    for seed in seeds:
        seeded = dataclasses.replace(hyper, seed=seed, init_bounds=uniform_bounds(lo, hi, dim))
        result = optimize(seeded, dim, fn)
        best.append(result.best_fitness)
        evaluations.append(result.state.evaluations)

    summary = BenchSummary(
        function=function,
        dim=dim,
        seeds=seeds,
        per_seed_best=best,
        median_best=statistics.median(best),
        evaluations=evaluations,
    )
    logger.info(f"Benchmark {function} dim={dim}: median best {summary.median_best:.6g} over {n_seeds} seeds")
    return summary
