"""
EM-PSO Schrodinger Solver Package

Gradient-free training of a small feed-forward network with exponentially
averaged momentum particle swarm optimization, applied to the
particle-in-a-box eigenproblem.

The package includes the following modules:
- swarm: the EM-PSO optimizer
- stability: deterministic-scheme stability analysis of the optimizer
- net: flat-parameter feed-forward network
- numerics: uniform grid, finite differences and quadrature
- schrodinger: trial solutions, residuals, regularization and analytic oracles
- benchmarks: optimizer test functions

Usage:
    from solver import HyperParams, optimize, total_loss
"""

from solver.swarm import (
    HyperParams,
    HyperParamsError,
    OptimizeResult,
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

from solver.stability import (
    SchemeCoefficients,
    StabilityVerdict,
    Trajectory,
    amplification_roots,
    analyze,
    is_stable,
    lambda_coefficients,
    recurrence_roots,
    scan_region,
    simulate_deterministic,
)

from solver.net import (
    ArchitectureError,
    MlpArchitecture,
    flatten,
    forward,
    forward_batch,
    forward_grid,
    init_params,
    param_count,
    unflatten,
)

from solver.numerics import (
    Grid,
    GridError,
    SampledFunction,
    derivative,
    integrate,
    make_grid,
    sample,
    second_derivative,
)

from solver.schrodinger import (
    REGULARIZATION_FLOOR,
    PENALTY_LOSS,
    BoundaryConditionError,
    BoundaryConditions,
    LossBreakdown,
    PiabProblem,
    RegularizationDomainError,
    analytic_energy,
    analytic_wavefunction,
    bvp_loss,
    generic_residual,
    phase_aligned_error,
    piab_residual,
    probability,
    regularization,
    regularization_derivative,
    score_trial_solution,
    total_loss,
    trial_solution,
)

from solver.benchmarks import BENCHMARKS

__all__ = [
    # Swarm
    'HyperParams',
    'HyperParamsError',
    'OptimizeResult',
    'Particle',
    'SwarmError',
    'SwarmState',
    'draw_coefficients',
    'init_swarm',
    'momentum_closed_form',
    'momentum_update',
    'optimize',
    'step',
    'uniform_bounds',

    # Stability
    'SchemeCoefficients',
    'StabilityVerdict',
    'Trajectory',
    'amplification_roots',
    'analyze',
    'is_stable',
    'lambda_coefficients',
    'recurrence_roots',
    'scan_region',
    'simulate_deterministic',

    # Network
    'ArchitectureError',
    'MlpArchitecture',
    'flatten',
    'forward',
    'forward_batch',
    'forward_grid',
    'init_params',
    'param_count',
    'unflatten',

    # Numerics
    'Grid',
    'GridError',
    'SampledFunction',
    'derivative',
    'integrate',
    'make_grid',
    'sample',
    'second_derivative',

    # Schrodinger problem
    'REGULARIZATION_FLOOR',
    'PENALTY_LOSS',
    'BoundaryConditionError',
    'BoundaryConditions',
    'LossBreakdown',
    'PiabProblem',
    'RegularizationDomainError',
    'analytic_energy',
    'analytic_wavefunction',
    'bvp_loss',
    'generic_residual',
    'phase_aligned_error',
    'piab_residual',
    'probability',
    'regularization',
    'regularization_derivative',
    'score_trial_solution',
    'total_loss',
    'trial_solution',

    # Benchmarks
    'BENCHMARKS',
]
