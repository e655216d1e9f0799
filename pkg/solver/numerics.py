"""
Discrete calculus on a uniform grid.

Provides the grid, sampled functions and the finite-difference and
quadrature rules that the residual and probability computations rely on.
"""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson

logger = logging.getLogger(__name__)

MIN_GRID_POINTS = 5
QUADRATURE_RULES = ("trapezoid", "simpson")


class GridError(ValueError):
    """Raised for invalid grids or mismatched sampled functions"""
    pass


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform grid of m nodes over [x0, x1]"""
    x0: float
    x1: float
    m: int
    nodes: np.ndarray
    h: float


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a function at every node of a grid"""
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.shape != (self.grid.m,):
            raise GridError(
                f"Expected {self.grid.m} values, got shape {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise GridError("Sampled function contains non-finite values")


def make_grid(x0: float, x1: float, m: int) -> Grid:
    """Build a uniform grid with exact endpoints."""
    if not x1 > x0:
        raise GridError(f"Grid requires x1 > x0, got x0={x0}, x1={x1}")
    if m < MIN_GRID_POINTS:
        raise GridError(f"Grid requires at least {MIN_GRID_POINTS} nodes, got {m}")

    nodes = np.linspace(x0, x1, m)
    nodes[0], nodes[-1] = x0, x1
    nodes.setflags(write=False)
    return Grid(x0=float(x0), x1=float(x1), m=int(m), nodes=nodes, h=(x1 - x0) / (m - 1))


def sample(grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> SampledFunction:
    """Evaluate a vectorized callable on every grid node."""
    values = np.asarray(fn(grid.nodes), dtype=float)
    if values.ndim == 0:
        values = np.full(grid.m, float(values))
    return SampledFunction(grid, values)


def same_grid(a: Grid, b: Grid) -> bool:
    return a is b or (a.m == b.m and a.x0 == b.x0 and a.x1 == b.x1)


def derivative(f: SampledFunction) -> SampledFunction:
    """
    First derivative by second-order finite differences.

    Central differences at interior nodes and the one-sided three-point
    stencils at both endpoints.
    """
    return SampledFunction(f.grid, np.gradient(f.values, f.grid.h, edge_order=2))


def second_derivative(f: SampledFunction) -> SampledFunction:
    """
    Second derivative by the three-point central stencil.

    Endpoint entries copy the nearest interior value; they never enter a
    loss because trial solutions pin the endpoints.
    """
    v = f.values
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / f.grid.h ** 2
    out[0] = out[1]
    out[-1] = out[-2]
    return SampledFunction(f.grid, out)


def integrate(f: SampledFunction, rule: str = "trapezoid") -> float:
    """Integrate a sampled function over its grid."""
    if rule == "trapezoid":
        v = f.values
        return float(f.grid.h * (0.5 * v[0] + np.sum(v[1:-1]) + 0.5 * v[-1]))
    if rule == "simpson":
        return float(simpson(f.values, dx=f.grid.h))
    raise GridError(f"Unknown quadrature rule '{rule}', expected one of {QUADRATURE_RULES}")
