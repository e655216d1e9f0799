"""
Experiment orchestration.

Wires the network and the problem layer into a swarm fitness, runs the
optimizer, captures strided histories and persists run records as JSON.
"""
import dataclasses
import json
import logging
import math
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np

from services.config_service import PROBLEM_BVP, PROBLEM_PIAB, RunConfig
from solver.benchmarks import BENCHMARKS
from solver.net import forward_grid, param_count
from solver.schrodinger import LossBreakdown, bvp_loss, total_loss, trial_solution
from solver.swarm import Bounds, SwarmState, optimize, uniform_bounds

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

STATUS_COMPLETED = "completed"
STATUS_FAILED = "failed"

HISTORY_KEYS = ("iteration", "total_loss", "residual_integral", "regularization", "probability", "energy")

# Global lock for record files
file_lock = threading.Lock()


class ExperimentError(RuntimeError):
    """Custom exception for failed experiment runs"""
    pass


@dataclass
class RunRecord:
    """Everything a run produced, enough to regenerate every exported series"""
    config: Dict[str, Any]
    seed: int
    status: str = STATUS_COMPLETED
    best_params: List[float] = field(default_factory=list)
    energy: Optional[float] = None
    final_loss: Optional[Dict[str, Any]] = None
    history: Dict[str, List[float]] = field(default_factory=lambda: {key: [] for key in HISTORY_KEYS})
    grid_nodes: List[float] = field(default_factory=list)
    wavefunction: List[float] = field(default_factory=list)
    evaluations: int = 0
    iterations: int = 0
    wall_clock_seconds: float = 0.0
    error: Optional[str] = None

    @property
    def problem(self) -> str:
        return self.config["problem"]

    @property
    def final_total(self) -> float:
        if self.final_loss is None:
            return math.inf
        return self.final_loss["total"]


class BestOfResult(NamedTuple):
    best: RunRecord
    records: List[RunRecord]


class _Objective:
    """Search space and fitness for one kind of problem"""
    dim: int
    bounds: Bounds

    def fitness(self, vector: np.ndarray) -> float:
        return self.breakdown(vector).total

    def breakdown(self, vector: np.ndarray) -> LossBreakdown:
        raise NotImplementedError

    def energy(self, vector: np.ndarray) -> Optional[float]:
        return None

    def solution(self, vector: np.ndarray):
        return None


class _PiabObjective(_Objective):
    """Network weights plus one trailing energy dimension"""

    def __init__(self, config: RunConfig):
        self.arch = config.architecture()
        self.grid = config.grid()
        self.problem = config.piab_problem()
        self.bc = self.problem.boundary_conditions
        self.rule = config.quadrature
        k = param_count(self.arch)
        self.dim = k + 1
        self.bounds = (uniform_bounds(config.weight_init_lo, config.weight_init_hi, k)
                       + (self.problem.energy_init_interval,))

    def breakdown(self, vector: np.ndarray) -> LossBreakdown:
        params, energy = vector[:-1], float(vector[-1])
        return total_loss(lambda g: forward_grid(self.arch, params, g), energy, self.grid, self.bc, self.rule)

    def energy(self, vector: np.ndarray) -> Optional[float]:
        return float(vector[-1])

    def solution(self, vector: np.ndarray):
        return trial_solution(forward_grid(self.arch, vector[:-1], self.grid), self.bc)


class _BvpObjective(_Objective):
    """Network weights for D[f] = f'' + a f' + b f - c = 0"""

    def __init__(self, config: RunConfig):
        self.arch = config.architecture()
        self.grid = config.grid()
        self.bc = config.boundary_conditions()
        self.coefs = (config.bvp_a, config.bvp_b, config.bvp_c)
        self.rule = config.quadrature
        self.dim = param_count(self.arch)
        self.bounds = uniform_bounds(config.weight_init_lo, config.weight_init_hi, self.dim)

    def breakdown(self, vector: np.ndarray) -> LossBreakdown:
        return bvp_loss(lambda g: forward_grid(self.arch, vector, g), self.grid, self.bc, *self.coefs, self.rule)

    def solution(self, vector: np.ndarray):
        return trial_solution(forward_grid(self.arch, vector, self.grid), self.bc)


class _BenchObjective(_Objective):
    def __init__(self, config: RunConfig):
        self.function, (lo, hi) = BENCHMARKS[config.benchmark]
        self.dim = config.dim
        self.bounds = uniform_bounds(lo, hi, self.dim)

    def fitness(self, vector: np.ndarray) -> float:
        return self.function(vector)

    def breakdown(self, vector: np.ndarray) -> LossBreakdown:
        value = self.function(vector)
        return LossBreakdown(residual_integral=value, probability=math.nan, regularization=0.0, total=value)


def build_objective(config: RunConfig) -> _Objective:
    if config.problem == PROBLEM_PIAB:
        return _PiabObjective(config)
    if config.problem == PROBLEM_BVP:
        return _BvpObjective(config)
    return _BenchObjective(config)


class _HistoryRecorder:
    """Records the global best every `stride` iterations"""

    def __init__(self, objective: _Objective, stride: int, max_iters: int):
        self.objective = objective
        self.stride = stride
        self.max_iters = max_iters
        self.history: Dict[str, List[float]] = {key: [] for key in HISTORY_KEYS}
        self._last_position = None
        self._last_breakdown = None

    def __call__(self, state: SwarmState) -> None:
        if state.iteration % self.stride == 0 or state.iteration == self.max_iters:
            self.record(state)

    def record(self, state: SwarmState) -> None:
        if self.history["iteration"] and self.history["iteration"][-1] == state.iteration:
            return
        if state.gbest_position is not self._last_position:
            self._last_position = state.gbest_position
            self._last_breakdown = self.objective.breakdown(state.gbest_position)
        b = self._last_breakdown
        energy = self.objective.energy(state.gbest_position)
        self.history["iteration"].append(state.iteration)
        self.history["total_loss"].append(state.gbest_fitness)
        self.history["residual_integral"].append(b.residual_integral)
        self.history["regularization"].append(b.regularization)
        self.history["probability"].append(b.probability)
        self.history["energy"].append(math.nan if energy is None else energy)
        logger.debug(f"iteration {state.iteration}: total={state.gbest_fitness:.9g}, p={b.probability:.9g}")


def record_path(out_dir: str, seed: int, failed: bool = False) -> str:
    suffix = ".failed.json" if failed else ".json"
    return os.path.join(out_dir, f"record_seed{seed}{suffix}")


def record_payload(record: RunRecord) -> str:
    """Canonical JSON of a record without its timing field."""
    data = dataclasses.asdict(record)
    data.pop("wall_clock_seconds")
    return json.dumps(data, sort_keys=True)


def save_record(record: RunRecord, out_dir: str) -> str:
    """Write a record to out_dir and return its path."""
    os.makedirs(out_dir, exist_ok=True)
    path = record_path(out_dir, record.seed, failed=record.status == STATUS_FAILED)
    with file_lock:
        with open(path, "w") as f:
            json.dump(dataclasses.asdict(record), f, indent=2, sort_keys=True)
            f.flush()
    logger.info(f"Saved run record to {path}")
    return path


def load_record(path: str) -> RunRecord:
    with open(path, "r") as f:
        data = json.load(f)
    return RunRecord(**data)


def run_experiment(config: RunConfig, seed: Optional[int] = None) -> RunRecord:
    """
    Run one seeded experiment and persist its record.

    Args:
        config: Validated run configuration
        seed: Optional seed overriding config.seed

    Returns:
        The completed RunRecord

    Raises:
        ExperimentError: If the run aborts; a failure record is written first
    """
    seed = config.seed if seed is None else seed
    objective = build_objective(config)
    hyper = config.hyper_params(objective.dim, seed=seed, bounds=objective.bounds)
    recorder = _HistoryRecorder(objective, config.history_stride, hyper.max_iters)
    record = RunRecord(config=config.to_dict(), seed=seed)

    logger.info(f"Running {config.problem} (seed={seed}) over {objective.dim} dimensions")
    started = time.perf_counter()
    try:
        result = optimize(hyper, objective.dim, objective.fitness, callback=recorder)
        recorder.record(result.state)

        best = result.best_position
        record.best_params = [float(v) for v in best]
        record.energy = objective.energy(best)
        record.final_loss = dataclasses.asdict(objective.breakdown(best))
        record.evaluations = result.state.evaluations
        record.iterations = result.state.iteration
        solution = objective.solution(best)
        if solution is not None:
            record.grid_nodes = [float(x) for x in solution.grid.nodes]
            record.wavefunction = [float(v) for v in solution.values]
    except Exception as e:
        record.status = STATUS_FAILED
        record.error = str(e)
        record.history = recorder.history
        record.wall_clock_seconds = time.perf_counter() - started
        logger.error(f"Experiment failed (seed={seed}): {e}")
        save_record(record, config.out_dir)
        raise ExperimentError(f"Experiment failed (seed={seed}): {e}") from e

    record.history = recorder.history
    record.wall_clock_seconds = time.perf_counter() - started
    save_record(record, config.out_dir)
    logger.info(
        f"Finished seed {seed}: total={record.final_total:.9g}, energy={record.energy}, "
        f"evaluations={record.evaluations}, {record.wall_clock_seconds:.1f}s"
    )
    return record


def run_best_of(config: RunConfig) -> BestOfResult:
    """Run seeds seed .. seed + seeds_best_of - 1 and keep the lowest final loss."""
    records = [run_experiment(config, seed=config.seed + i) for i in range(config.seeds_best_of)]
    best = min(records, key=lambda r: r.final_total)
    logger.info(f"Best of {len(records)} seeds: seed {best.seed} with total loss {best.final_total:.9g}")
    return BestOfResult(best, records)
