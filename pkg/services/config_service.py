"""
Run configuration loading and validation.

Configuration files are flat key=value text (comments start with '#'),
parsed with python-dotenv. Every key is optional; defaults follow the
ground-state experiment and are adjusted per quantum number.
"""
import dataclasses
import logging
import os
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

from dotenv.parser import parse_stream

from solver.benchmarks import BENCHMARKS
from solver.net import DEFAULT_LAYERS, ArchitectureError, MlpArchitecture
from solver.numerics import QUADRATURE_RULES, Grid, GridError, make_grid
from solver.schrodinger import BoundaryConditionError, BoundaryConditions, PiabProblem
from solver.swarm import HyperParams, HyperParamsError, uniform_bounds

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

PROBLEM_PIAB = "piab"
PROBLEM_BVP = "generic_bvp"
BENCH_PREFIX = "bench:"

# Energy search windows and iteration budgets of the reference experiments
DEFAULT_ENERGY_INIT = {1: (4.0, 6.0), 2: (19.0, 21.0)}
DEFAULT_ITERS = {1: 5000, 2: 10000}
DEFAULT_ITERS_EXCITED = 10000
DEFAULT_ITERS_BVP = 5000
DEFAULT_ITERS_BENCH = 500


class ConfigError(ValueError):
    """Custom exception for invalid run configurations"""
    pass


def _parse_layers(text: str) -> Tuple[int, ...]:
    return tuple(int(w) for w in text.replace(" ", "").split(",") if w)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text}")


def _optional_int(text: str) -> Optional[int]:
    return None if text.strip().lower() in ("", "none", "off") else int(text)


# key -> parser for its text value
KEY_PARSERS: Dict[str, Callable[[str], Any]] = {
    "problem": str.strip,
    "n": int,
    "grid_m": int,
    "box_length": float,
    "layers": _parse_layers,
    "activation": str.strip,
    "beta": float,
    "c1": float,
    "c2": float,
    "swarm_size": int,
    "max_iters": int,
    "seed": int,
    "energy_init_lo": float,
    "energy_init_hi": float,
    "weight_init_lo": float,
    "weight_init_hi": float,
    "out_dir": str.strip,
    "history_stride": int,
    "quadrature": str.strip,
    "seeds_best_of": int,
    "dim": int,
    "workers": int,
    "early_stop_window": _optional_int,
    "early_stop_tol": float,
    "allow_unsafe": _parse_bool,
    "bvp_a": float,
    "bvp_b": float,
    "bvp_c": float,
    "bc_x0": float,
    "bc_u0": float,
    "bc_x1": float,
    "bc_u1": float,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated experiment configuration"""
    problem: str = PROBLEM_PIAB
    n: int = 1
    grid_m: int = 101
    box_length: float = 1.0
    layers: Tuple[int, ...] = DEFAULT_LAYERS
    activation: str = "tanh"
    beta: float = 0.9
    c1: float = 0.8
    c2: float = 0.9
    swarm_size: int = 50
    max_iters: int = 5000
    seed: int = 0
    energy_init_lo: float = 4.0
    energy_init_hi: float = 6.0
    weight_init_lo: float = -1.0
    weight_init_hi: float = 1.0
    out_dir: str = "runs"
    history_stride: int = 10
    quadrature: str = "trapezoid"
    seeds_best_of: int = 3
    dim: int = 5
    workers: int = 1
    early_stop_window: Optional[int] = None
    early_stop_tol: float = 0.0
    allow_unsafe: bool = False
    bvp_a: float = 0.0
    bvp_b: float = 0.0
    bvp_c: float = 0.0
    bc_x0: float = 0.0
    bc_u0: float = 0.0
    bc_x1: float = 1.0
    bc_u1: float = 0.0

    @property
    def benchmark(self) -> Optional[str]:
        if self.problem.startswith(BENCH_PREFIX):
            return self.problem[len(BENCH_PREFIX):]
        return None

    def hyper_params(self, dim: int, seed: Optional[int] = None, bounds=None) -> HyperParams:
        """Optimizer settings for a search space of the given dimension."""
        if bounds is None:
            bounds = uniform_bounds(self.weight_init_lo, self.weight_init_hi, dim)
        return HyperParams(
            beta=self.beta,
            c1=self.c1,
            c2=self.c2,
            swarm_size=self.swarm_size,
            max_iters=self.max_iters,
            seed=self.seed if seed is None else seed,
            init_bounds=bounds,
            early_stop_window=self.early_stop_window,
            early_stop_tol=self.early_stop_tol,
            workers=self.workers,
            allow_unsafe=self.allow_unsafe,
        )

    def architecture(self) -> MlpArchitecture:
        return MlpArchitecture(self.layers, self.activation)

    def grid(self) -> Grid:
        if self.problem == PROBLEM_BVP:
            return make_grid(self.bc_x0, self.bc_x1, self.grid_m)
        return make_grid(0.0, self.box_length, self.grid_m)

    def piab_problem(self) -> PiabProblem:
        return PiabProblem(
            quantum_number=self.n,
            box_length=self.box_length,
            energy_init_interval=(self.energy_init_lo, self.energy_init_hi),
        )

    def boundary_conditions(self) -> BoundaryConditions:
        if self.problem == PROBLEM_BVP:
            return BoundaryConditions(self.bc_x0, self.bc_u0, self.bc_x1, self.bc_u1)
        return self.piab_problem().boundary_conditions

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["layers"] = list(self.layers)
        return data


def _apply_defaults(values: Dict[str, Any]) -> Dict[str, Any]:
    """Fill the problem-dependent defaults the caller left out."""
    values = dict(values)
    problem = values.get("problem", PROBLEM_PIAB)
    n = values.get("n", 1)

    if problem == PROBLEM_PIAB:
        if "energy_init_lo" not in values and "energy_init_hi" not in values:
            if n not in DEFAULT_ENERGY_INIT:
                raise ConfigError(
                    f"energy_init_lo/energy_init_hi must be given for n={n}; defaults exist for n in {sorted(DEFAULT_ENERGY_INIT)}"
                )
            values["energy_init_lo"], values["energy_init_hi"] = DEFAULT_ENERGY_INIT[n]
        values.setdefault("max_iters", DEFAULT_ITERS.get(n, DEFAULT_ITERS_EXCITED))
    elif problem == PROBLEM_BVP:
        values.setdefault("max_iters", DEFAULT_ITERS_BVP)
    else:
        values.setdefault("max_iters", DEFAULT_ITERS_BENCH)
    return values


def validate_config(config: RunConfig) -> RunConfig:
    """Check every module-level invariant the configuration feeds into."""
    if config.problem not in (PROBLEM_PIAB, PROBLEM_BVP) and config.benchmark not in BENCHMARKS:
        raise ConfigError(
            f"Invalid value for 'problem': {config.problem!r}; expected piab, generic_bvp or "
            f"one of {[BENCH_PREFIX + name for name in BENCHMARKS]}"
        )
    if config.quadrature not in QUADRATURE_RULES:
        raise ConfigError(f"Invalid value for 'quadrature': {config.quadrature!r}, expected one of {QUADRATURE_RULES}")
    if config.history_stride < 1:
        raise ConfigError(f"Invalid value for 'history_stride': {config.history_stride}, must be >= 1")
    if config.seeds_best_of < 1:
        raise ConfigError(f"Invalid value for 'seeds_best_of': {config.seeds_best_of}, must be >= 1")
    if config.dim < 1:
        raise ConfigError(f"Invalid value for 'dim': {config.dim}, must be >= 1")
    if not config.weight_init_lo <= config.weight_init_hi:
        raise ConfigError("Invalid weight init interval: weight_init_lo must not exceed weight_init_hi")

    try:
        config.hyper_params(dim=1)
    except HyperParamsError as e:
        raise ConfigError(f"Invalid hyperparameters: {e}") from e

    if config.benchmark is None:
        try:
            config.architecture()
            config.grid()
            config.boundary_conditions()
            if config.problem == PROBLEM_PIAB:
                config.piab_problem()
        except (ArchitectureError, GridError, BoundaryConditionError, ValueError) as e:
            raise ConfigError(f"Invalid problem settings: {e}") from e

    if os.path.isdir(config.out_dir) and not os.access(config.out_dir, os.W_OK):
        raise ConfigError(f"Invalid value for 'out_dir': {config.out_dir} is not writable")
    return config


def config_from_mapping(raw: Dict[str, Optional[str]]) -> RunConfig:
    """Parse, default and validate raw key=value pairs."""
    values: Dict[str, Any] = {}
    for key, text in raw.items():
        if key not in KEY_PARSERS:
            raise ConfigError(f"Unknown config key '{key}'")
        if text is None:
            raise ConfigError(f"Missing value for config key '{key}'")
        try:
            values[key] = KEY_PARSERS[key](text)
        except ValueError as e:
            raise ConfigError(f"Invalid value for '{key}': {text!r} ({e})") from e

    return validate_config(RunConfig(**_apply_defaults(values)))


def read_bindings(path: str) -> Dict[str, Optional[str]]:
    """
    Parse key=value lines with python-dotenv, rejecting any line it cannot read.

    Raises:
        ConfigError: On the first malformed line, naming its line number
    """
    raw: Dict[str, Optional[str]] = {}
    with open(path, "r", encoding="utf-8") as stream:
        for binding in parse_stream(stream):
            if binding.error:
                line = binding.original.string.strip()
                logger.error(f"Malformed line {binding.original.line} in {path}: {line!r}")
                raise ConfigError(f"Cannot parse line {binding.original.line} of {path}: {line!r}")
            if binding.key is not None:
                raw[binding.key] = binding.value
    return raw


def load_config(path: str) -> RunConfig:
    """Load a key=value run configuration file."""
    if not os.path.isfile(path):
        raise ConfigError(f"Config file not found: {path}")
    try:
        raw = read_bindings(path)
    except OSError as e:
        logger.error(f"Failed to read config file {path}: {e}")
        raise ConfigError(f"Failed to read config file {path}: {e}") from e

    try:
        config = config_from_mapping(raw)
    except ConfigError as e:
        logger.error(f"Invalid config file {path}: {e}")
        raise
    logger.info(f"Loaded config {path}: problem={config.problem}, n={config.n}, max_iters={config.max_iters}")
    return config
