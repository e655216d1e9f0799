"""
Von Neumann stability analysis of the deterministic EM-PSO scheme.

With pbest and gbest frozen at p1, p2 and r1 = r2 = 1, a particle follows the
third-order recurrence

    x[d+1] = l1 x[d] - l2 x[d-1] - l3 x[d-2] + c1 p1 + c2 p2

with l1 = 2 - beta - c1 - c2, l2 = (1 - beta)^2, l3 = beta (1 - beta). The
homogeneous form is analysed through the characteristic cubic

    A^3 - l1 A^2 + l2 A - l3 = 0

whose root moduli are the amplification factors. The simulated recurrence
carries the opposite sign on l3, so its own characteristic polynomial is
reported next to the cubic.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

DIVERGENCE_LIMIT = 1e300


@dataclass(frozen=True)
class SchemeCoefficients:
    lambda1: float
    lambda2: float
    lambda3: float


@dataclass(frozen=True)
class StabilityVerdict:
    beta: float
    c1: float
    c2: float
    coefficients: SchemeCoefficients
    closed_form_stable: bool
    roots: Tuple[complex, complex, complex]
    max_amplification: float
    recurrence_roots: Tuple[complex, complex, complex]
    recurrence_amplification: float


class Trajectory(NamedTuple):
    values: List[float]
    diverged: bool


def lambda_coefficients(beta: float, c1: float, c2: float) -> SchemeCoefficients:
    return SchemeCoefficients(
        lambda1=2.0 - beta - c1 - c2,
        lambda2=(1.0 - beta) ** 2,
        lambda3=beta * (1.0 - beta),
    )


def _companion_roots(a2: float, a1: float, a0: float) -> Tuple[complex, complex, complex]:
    """Roots of A^3 + a2 A^2 + a1 A + a0 as companion-matrix eigenvalues."""
    companion = np.array([
        [-a2, -a1, -a0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ])
    roots = np.linalg.eigvals(companion)
    return tuple(complex(r) for r in sorted(roots, key=lambda r: (-abs(r), r.real, r.imag)))


def amplification_roots(coeffs: SchemeCoefficients) -> Tuple[complex, complex, complex]:
    """Roots of A^3 - l1 A^2 + l2 A - l3, largest modulus first."""
    return _companion_roots(-coeffs.lambda1, coeffs.lambda2, -coeffs.lambda3)


def recurrence_roots(coeffs: SchemeCoefficients) -> Tuple[complex, complex, complex]:
    """Roots of A^3 - l1 A^2 + l2 A + l3, the polynomial of the simulated recurrence."""
    return _companion_roots(-coeffs.lambda1, coeffs.lambda2, coeffs.lambda3)


def is_stable(beta: float, c1: float, c2: float) -> bool:
    """Closed-form region: 0 < beta < 1 and 0 <= c1 + c2 <= 2."""
    return 0.0 < beta < 1.0 and 0.0 <= c1 + c2 <= 2.0


def analyze(beta: float, c1: float, c2: float) -> StabilityVerdict:
    coeffs = lambda_coefficients(beta, c1, c2)
    roots = amplification_roots(coeffs)
    rec_roots = recurrence_roots(coeffs)
    return StabilityVerdict(
        beta=beta,
        c1=c1,
        c2=c2,
        coefficients=coeffs,
        closed_form_stable=is_stable(beta, c1, c2),
        roots=roots,
        max_amplification=max(abs(r) for r in roots),
        recurrence_roots=rec_roots,
        recurrence_amplification=max(abs(r) for r in rec_roots),
    )


def simulate_deterministic(beta: float, c1: float, c2: float, p1: float, p2: float,
                           x_init: Sequence[float], steps: int) -> Trajectory:
    """
    Iterate the recurrence from three seed positions (oldest first).

    The returned values start with the seeds. A non-finite or overflowing
    value ends the trajectory early with diverged set.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if len(x_init) != 3:
        raise ValueError(f"The recurrence needs exactly three seed positions, got {len(x_init)}")

    coeffs = lambda_coefficients(beta, c1, c2)
    forcing = c1 * p1 + c2 * p2
    values = [float(x) for x in x_init]
    for _ in range(steps):
        x_next = (coeffs.lambda1 * values[-1]
                  - coeffs.lambda2 * values[-2]
                  - coeffs.lambda3 * values[-3]
                  + forcing)
        if not math.isfinite(x_next) or abs(x_next) > DIVERGENCE_LIMIT:
            logger.debug(f"Trajectory diverged after {len(values) - 3} steps (beta={beta}, c1={c1}, c2={c2})")
            return Trajectory(values, True)
        values.append(x_next)
    return Trajectory(values, False)


def scan_region(betas: Sequence[float], sums: Sequence[float]) -> List[StabilityVerdict]:
    """Verdicts over a (beta, c1 + c2) grid, splitting each sum evenly between c1 and c2."""
    return [analyze(beta, s / 2.0, s / 2.0) for beta in betas for s in sums]
