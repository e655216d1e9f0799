"""Standard test functions for checking the optimizer on its own."""
from typing import Callable, Dict, Tuple

import numpy as np


def sphere(x: np.ndarray) -> float:
    """Minimum is at f(0,...,0) = 0."""
    return float(np.sum(x * x))


def rastrigin(x: np.ndarray) -> float:
    """Minimum is at f(0,...,0) = 0; regular grid of local minima around it."""
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def rosenbrock(x: np.ndarray) -> float:
    """Minimum is at f(1,...,1) = 0."""
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


# name -> (function, default per-dimension init interval)
BENCHMARKS: Dict[str, Tuple[Callable[[np.ndarray], float], Tuple[float, float]]] = {
    "sphere": (sphere, (-5.0, 5.0)),
    "rastrigin": (rastrigin, (-5.12, 5.12)),
    "rosenbrock": (rosenbrock, (-2.048, 2.048)),
}
