"""
Exponentially averaged momentum particle swarm optimizer (EM-PSO).

Each iteration, per particle:
    M <- beta * M + (1 - beta) * v
    v <- M + c1 * r1 * (P - x) + c2 * r2 * (G - x)
    x <- x + v
followed by a personal-best update, then one global-best reduction over the
whole swarm. The optimizer minimizes a caller-supplied fitness function.

All random draws come from counter-based streams keyed by
(seed, particle index, iteration), so results do not depend on the order or
degree of parallelism in which fitness evaluations run.
"""
import logging
import math
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

Fitness = Callable[[np.ndarray], float]
Bounds = Tuple[Tuple[float, float], ...]

INIT_ITERATION = 0


class HyperParamsError(ValueError):
    """Raised when optimizer hyperparameters violate their constraints"""
    pass


class SwarmError(ValueError):
    """Raised when a swarm cannot be built for the requested search space"""
    pass


@dataclass(frozen=True)
class HyperParams:
    """
    Optimizer knobs.

    beta must lie in (0, 1). c1 + c2 must lie in [0, 2] unless allow_unsafe
    is set, which stability experiments use to explore the divergent region.
    """
    beta: float = 0.9
    c1: float = 0.8
    c2: float = 0.9
    swarm_size: int = 50
    max_iters: int = 5000
    seed: int = 0
    init_bounds: Bounds = ()
    early_stop_window: Optional[int] = None
    early_stop_tol: float = 0.0
    workers: int = 1
    allow_unsafe: bool = False

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.init_bounds)
        object.__setattr__(self, "init_bounds", bounds)

        if not 0.0 < self.beta < 1.0:
            raise HyperParamsError(
                f"beta={self.beta} is outside (0, 1); the momentum scheme is only stable for 0 < beta < 1"
            )
        if not self.allow_unsafe and not 0.0 <= self.c1 + self.c2 <= 2.0:
            raise HyperParamsError(
                f"c1 + c2 = {self.c1 + self.c2} is outside [0, 2]; "
                "the momentum scheme is only stable for 0 <= c1 + c2 <= 2 (set allow_unsafe to override)"
            )
        if self.swarm_size < 1:
            raise HyperParamsError(f"swarm_size must be >= 1, got {self.swarm_size}")
        if self.max_iters < 1:
            raise HyperParamsError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.seed < 0:
            raise HyperParamsError(f"seed must be non-negative, got {self.seed}")
        if self.workers < 1:
            raise HyperParamsError(f"workers must be >= 1, got {self.workers}")
        if self.early_stop_window is not None and self.early_stop_window < 1:
            raise HyperParamsError(f"early_stop_window must be >= 1, got {self.early_stop_window}")
        for d, (lo, hi) in enumerate(bounds):
            if not lo <= hi:
                raise HyperParamsError(f"init_bounds[{d}] = ({lo}, {hi}) has lower > upper")


@dataclass(frozen=True, eq=False)
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    momentum: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float


@dataclass(frozen=True, eq=False)
class SwarmState:
    particles: Tuple[Particle, ...]
    gbest_position: np.ndarray
    gbest_fitness: float
    iteration: int = 0
    evaluations: int = 0

    @property
    def dim(self) -> int:
        return self.gbest_position.shape[0]


class OptimizeResult(NamedTuple):
    best_position: np.ndarray
    best_fitness: float
    history: List[float]
    state: SwarmState


def uniform_bounds(lo: float, hi: float, dim: int) -> Bounds:
    return tuple((lo, hi) for _ in range(dim))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _stream(seed: int, particle_index: int, iteration: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(particle_index, iteration))
    return np.random.Generator(np.random.Philox(seq))


def draw_coefficients(seed: int, particle_index: int, iteration: int,
                      dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """r1, r2 in [0, 1) for one particle at one iteration, one entry per dimension."""
    r = _stream(seed, particle_index, iteration).random((2, dim))
    return r[0], r[1]


def _as_fitness(value) -> float:
    value = float(value)
    return value if math.isfinite(value) else math.inf


def _evaluate(fitness: Fitness, positions: Sequence[np.ndarray],
              executor: Optional[Executor]) -> List[float]:
    if executor is None:
        return [_as_fitness(fitness(x)) for x in positions]
    return [_as_fitness(f) for f in executor.map(fitness, positions)]


def _reduce_best(particles: Sequence[Particle]) -> int:
    """Index of the lowest pbest fitness, lowest index on ties."""
    return int(np.argmin([p.pbest_fitness for p in particles]))


def init_swarm(hyper: HyperParams, dim: int, fitness: Fitness,
               executor: Optional[Executor] = None) -> SwarmState:
    """Uniform random positions inside init_bounds, zero velocities and momenta."""
    if dim < 1:
        raise SwarmError(f"Search space dimension must be positive, got {dim}")
    if len(hyper.init_bounds) != dim:
        raise SwarmError(
            f"init_bounds covers {len(hyper.init_bounds)} dimensions, search space has {dim}"
        )

    lo = np.array([b[0] for b in hyper.init_bounds])
    hi = np.array([b[1] for b in hyper.init_bounds])
    positions = [
        _frozen(lo + (hi - lo) * _stream(hyper.seed, i, INIT_ITERATION).random(dim))
        for i in range(hyper.swarm_size)
    ]
    fitnesses = _evaluate(fitness, positions, executor)

    zeros = _frozen(np.zeros(dim))
    particles = tuple(
        Particle(position=x, velocity=zeros, momentum=zeros, pbest_position=x, pbest_fitness=f)
        for x, f in zip(positions, fitnesses)
    )
    best = _reduce_best(particles)
    return SwarmState(
        particles=particles,
        gbest_position=particles[best].pbest_position,
        gbest_fitness=particles[best].pbest_fitness,
        iteration=0,
        evaluations=hyper.swarm_size,
    )


def momentum_update(momentum: np.ndarray, velocity: np.ndarray, beta: float) -> np.ndarray:
    """beta * M + (1 - beta) * v"""
    return beta * np.asarray(momentum, dtype=float) + (1.0 - beta) * np.asarray(velocity, dtype=float)


def momentum_closed_form(velocity_history: Sequence[np.ndarray], beta: float) -> np.ndarray:
    """
    Momentum after d + 1 updates from M = 0, written as an explicit sum:
    sum over k = 0..d of beta^k (1 - beta) v^(d - k).
    """
    if len(velocity_history) == 0:
        raise ValueError("Velocity history must not be empty")
    history = np.asarray(velocity_history, dtype=float).reshape(len(velocity_history), -1)
    d = history.shape[0] - 1
    weights = (1.0 - beta) * beta ** np.arange(d, -1, -1)
    return weights @ history


def step(state: SwarmState, hyper: HyperParams, fitness: Fitness,
         executor: Optional[Executor] = None) -> SwarmState:
    """Advance the swarm by one iteration and return the new snapshot."""
    iteration = state.iteration + 1
    g = state.gbest_position

    moved = []
    for i, particle in enumerate(state.particles):
        r1, r2 = draw_coefficients(hyper.seed, i, iteration, state.dim)
        x = particle.position
        momentum = momentum_update(particle.momentum, particle.velocity, hyper.beta)
        velocity = (momentum
                    + hyper.c1 * r1 * (particle.pbest_position - x)
                    + hyper.c2 * r2 * (g - x))
        moved.append((_frozen(x + velocity), _frozen(velocity), _frozen(momentum)))

    fitnesses = _evaluate(fitness, [m[0] for m in moved], executor)

    particles = []
    for particle, (x, v, m), f in zip(state.particles, moved, fitnesses):
        if f < particle.pbest_fitness:
            pbest_position, pbest_fitness = x, f
        else:
            pbest_position, pbest_fitness = particle.pbest_position, particle.pbest_fitness
        particles.append(Particle(x, v, m, pbest_position, pbest_fitness))

    best = _reduce_best(particles)
    if particles[best].pbest_fitness < state.gbest_fitness:
        gbest_position, gbest_fitness = particles[best].pbest_position, particles[best].pbest_fitness
    else:
        gbest_position, gbest_fitness = state.gbest_position, state.gbest_fitness

    return SwarmState(
        particles=tuple(particles),
        gbest_position=gbest_position,
        gbest_fitness=gbest_fitness,
        iteration=iteration,
        evaluations=state.evaluations + len(particles),
    )


def _stalled(history: List[float], window: Optional[int], tol: float) -> bool:
    if window is None or len(history) <= window:
        return False
    return history[-window - 1] - history[-1] <= tol


def optimize(hyper: HyperParams, dim: int, fitness: Fitness,
             callback: Optional[Callable[[SwarmState], None]] = None) -> OptimizeResult:
    """
    Run the swarm for max_iters iterations, or until the global best improves
    by no more than early_stop_tol over early_stop_window iterations.

    history holds the global best fitness after every executed iteration.
    """
    logger.info(
        f"Starting EM-PSO: dim={dim}, swarm_size={hyper.swarm_size}, max_iters={hyper.max_iters}, "
        f"beta={hyper.beta}, c1={hyper.c1}, c2={hyper.c2}, seed={hyper.seed}"
    )

    executor = ThreadPoolExecutor(max_workers=hyper.workers) if hyper.workers > 1 else None
    try:
        state = init_swarm(hyper, dim, fitness, executor)
        history: List[float] = []
        for _ in range(hyper.max_iters):
            state = step(state, hyper, fitness, executor)
            history.append(state.gbest_fitness)
            if callback is not None:
                callback(state)
            if _stalled(history, hyper.early_stop_window, hyper.early_stop_tol):
                logger.info(f"Early stop at iteration {state.iteration}: best={state.gbest_fitness:.9g}")
                break
    finally:
        if executor is not None:
            executor.shutdown()

    logger.info(
        f"EM-PSO finished after {state.iteration} iterations, {state.evaluations} evaluations: "
        f"best={state.gbest_fitness:.9g}"
    )
    return OptimizeResult(state.gbest_position, state.gbest_fitness, history, state)
