"""
Particle-in-a-box problem layer.

Builds trial solutions that satisfy the boundary conditions by construction,
scores them against the time-independent Schrodinger equation (or the generic
second-order boundary value problem), and provides the analytic eigenpairs
used as oracles. Natural units: hbar = m = 1.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from solver.numerics import (
    Grid,
    GridError,
    SampledFunction,
    derivative,
    integrate,
    same_grid,
    sample,
    second_derivative,
)

logger = logging.getLogger(__name__)

# Coefficients of p**a and p**-a for a = 1..4; each is the previous one
# divided by 2 * a.
REGULARIZATION_COEFFS = (20.0, 5.0, 5.0 / 6.0, 5.0 / 48.0)
REGULARIZATION_FLOOR = 51.875
PENALTY_LOSS = 1e12

UProvider = Callable[[Grid], SampledFunction]


class BoundaryConditionError(ValueError):
    """Raised for degenerate boundary conditions"""
    pass


class RegularizationDomainError(ValueError):
    """Raised when the integrated probability is not positive"""
    pass


@dataclass(frozen=True)
class BoundaryConditions:
    x0: float
    u0: float
    x1: float
    u1: float

    def __post_init__(self):
        if self.x1 == self.x0:
            raise BoundaryConditionError(f"Degenerate boundary conditions: x0 == x1 == {self.x0}")


@dataclass(frozen=True)
class PiabProblem:
    """Infinite square well of width box_length with target mode n"""
    quantum_number: int = 1
    box_length: float = 1.0
    energy_init_interval: Tuple[float, float] = (4.0, 6.0)

    def __post_init__(self):
        if self.box_length <= 0:
            raise ValueError(f"box_length must be positive, got {self.box_length}")
        if self.quantum_number < 1:
            raise ValueError(f"quantum_number must be >= 1, got {self.quantum_number}")
        lo, hi = self.energy_init_interval
        if not lo < hi:
            raise ValueError(f"Energy init interval must be non-degenerate, got {self.energy_init_interval}")

    @property
    def boundary_conditions(self) -> BoundaryConditions:
        return BoundaryConditions(0.0, 0.0, self.box_length, 0.0)


@dataclass(frozen=True)
class LossBreakdown:
    residual_integral: float
    probability: float
    regularization: float
    total: float
    penalized: bool = False


def penalty_breakdown(probability: float = 0.0) -> LossBreakdown:
    return LossBreakdown(
        residual_integral=math.nan,
        probability=probability,
        regularization=math.nan,
        total=PENALTY_LOSS,
        penalized=True,
    )


def trial_solution(u_raw: SampledFunction, bc: BoundaryConditions) -> SampledFunction:
    """
    Combine raw network output with the boundary values.

    u_hat = u1 (x - x0)/(x1 - x0) + u0 (x - x1)/(x0 - x1) + (x - x0)(x - x1) u
    """
    if bc.x1 == bc.x0:
        raise BoundaryConditionError("Degenerate boundary conditions")
    x = u_raw.grid.nodes
    values = (bc.u1 * (x - bc.x0) / (bc.x1 - bc.x0)
              + bc.u0 * (x - bc.x1) / (bc.x0 - bc.x1)
              + (x - bc.x0) * (x - bc.x1) * u_raw.values)
    # the polynomial term vanishes at the nodes that coincide with the endpoints
    if x[0] == bc.x0:
        values[0] = bc.u0
    if x[-1] == bc.x1:
        values[-1] = bc.u1
    return SampledFunction(u_raw.grid, values)


def _interior_only(values: np.ndarray) -> np.ndarray:
    values[0] = 0.0
    values[-1] = 0.0
    return values


def generic_residual(f: SampledFunction, a_coef: float, b_coef: float, c_coef: float) -> SampledFunction:
    """D[f] = f'' + a f' + b f - c on interior nodes, zero at the endpoints."""
    values = (second_derivative(f).values
              + a_coef * derivative(f).values
              + b_coef * f.values
              - c_coef)
    return SampledFunction(f.grid, _interior_only(values))


def piab_residual(psi_hat: SampledFunction, energy: float) -> SampledFunction:
    """-1/2 psi'' - E psi inside the box (V = 0), zero at the walls."""
    values = -0.5 * second_derivative(psi_hat).values - energy * psi_hat.values
    return SampledFunction(psi_hat.grid, _interior_only(values))


def probability(psi_hat: SampledFunction, rule: str = "trapezoid") -> float:
    """Integrated probability density over the box."""
    return integrate(SampledFunction(psi_hat.grid, psi_hat.values ** 2), rule)


def regularization(p: float) -> float:
    """
    Probability regularization R(p).

    (1 - p)^2 plus c_a (p^a + p^-a) for a = 1..4. Minimum 51.875 at p = 1.
    """
    if not p > 0:
        raise RegularizationDomainError(f"Regularization is undefined for p = {p}")
    terms = [(1.0 - p) ** 2]
    for a, coeff in enumerate(REGULARIZATION_COEFFS, start=1):
        terms.append(coeff / p ** a)
        terms.append(coeff * p ** a)
    return math.fsum(terms)


def regularization_derivative(p: float) -> float:
    """dR/dp; vanishes at p = 1."""
    if not p > 0:
        raise RegularizationDomainError(f"Regularization is undefined for p = {p}")
    terms = [-2.0 * (1.0 - p)]
    for a, coeff in enumerate(REGULARIZATION_COEFFS, start=1):
        terms.append(-a * coeff / p ** (a + 1))
        terms.append(a * coeff * p ** (a - 1))
    return math.fsum(terms)


def score_trial_solution(psi_hat: SampledFunction, energy: float,
                         rule: str = "trapezoid") -> LossBreakdown:
    """Loss of an already-constructed trial wavefunction."""
    try:
        residual = piab_residual(psi_hat, energy)
        residual_integral = integrate(SampledFunction(residual.grid, residual.values ** 2), rule)
        p = probability(psi_hat, rule)
    except GridError:
        return penalty_breakdown()
    try:
        reg = regularization(p)
    except (RegularizationDomainError, OverflowError, ZeroDivisionError):
        # p <= 0, or p so large or small that its fourth power leaves float range
        logger.debug(f"Penalizing non-physical candidate with p = {p}")
        return penalty_breakdown(p)

    total = residual_integral + reg
    if not math.isfinite(total):
        return penalty_breakdown(p)
    return LossBreakdown(
        residual_integral=residual_integral,
        probability=p,
        regularization=reg,
        total=total,
    )


def total_loss(u_raw_provider: UProvider, energy: float, grid: Grid,
               bc: BoundaryConditions, rule: str = "trapezoid") -> LossBreakdown:
    """Residual integral plus probability regularization for a raw-output provider."""
    try:
        u_raw = u_raw_provider(grid)
    except GridError as e:
        # raw output overflowed to non-finite values
        logger.debug(f"Penalizing candidate with invalid raw output: {e}")
        return penalty_breakdown()
    if not same_grid(u_raw.grid, grid):
        raise GridError("Raw output was sampled on a different grid")
    try:
        psi_hat = trial_solution(u_raw, bc)
    except GridError:
        return penalty_breakdown()
    return score_trial_solution(psi_hat, energy, rule)


def bvp_loss(u_raw_provider: UProvider, grid: Grid, bc: BoundaryConditions,
             a_coef: float, b_coef: float, c_coef: float,
             rule: str = "trapezoid") -> LossBreakdown:
    """Integrated squared residual of the generic boundary value problem."""
    try:
        u_hat = trial_solution(u_raw_provider(grid), bc)
        residual = generic_residual(u_hat, a_coef, b_coef, c_coef)
        residual_integral = integrate(SampledFunction(grid, residual.values ** 2), rule)
        p = probability(u_hat, rule)
    except GridError:
        return penalty_breakdown()
    if not math.isfinite(residual_integral):
        return penalty_breakdown()
    return LossBreakdown(
        residual_integral=residual_integral,
        probability=p,
        regularization=0.0,
        total=residual_integral,
    )


def analytic_wavefunction(n: int, a: float, grid: Grid) -> SampledFunction:
    """psi_n(x) = sqrt(2/a) sin(n pi x / a)"""
    return sample(grid, lambda x: math.sqrt(2.0 / a) * np.sin(n * math.pi * x / a))


def analytic_energy(n: int, a: float) -> float:
    """E_n = n^2 pi^2 / (2 a^2)"""
    return n ** 2 * math.pi ** 2 / (2.0 * a ** 2)


def phase_aligned_error(psi_hat: SampledFunction, psi_ref: SampledFunction) -> float:
    """Max-node error after choosing the better of the two global signs."""
    if not same_grid(psi_hat.grid, psi_ref.grid):
        raise GridError("Cannot compare wavefunctions sampled on different grids")
    return min(
        float(np.max(np.abs(sign * psi_hat.values - psi_ref.values)))
        for sign in (1.0, -1.0)
    )
