"""
End-to-end particle-in-a-box runs with the default settings.

These take minutes; run them with `pytest -m slow`.
"""
import math

import numpy as np
import pytest

from services.config_service import config_from_mapping
from services.experiment_service import run_best_of
from solver.numerics import SampledFunction, make_grid
from solver.schrodinger import analytic_energy, analytic_wavefunction, phase_aligned_error

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("n,energy_tol", [(1, 5e-3), (2, 2e-2)])
def test_recovers_eigenpair(n, energy_tol, tmp_path):
    config = config_from_mapping({"problem": "piab", "n": str(n), "out_dir": str(tmp_path)})
    best = run_best_of(config).best

    assert abs(best.energy - analytic_energy(n, 1.0)) <= energy_tol
    assert best.final_total >= 51.875
    if n == 1:
        assert best.final_total <= 51.95
    assert best.final_loss["residual_integral"] <= 0.05
    assert 0.99 <= best.final_loss["probability"] <= 1.01

    grid = make_grid(0.0, 1.0, config.grid_m)
    psi_hat = SampledFunction(grid, np.array(best.wavefunction))
    assert phase_aligned_error(psi_hat, analytic_wavefunction(n, 1.0, grid)) <= 0.08 * math.sqrt(2.0)
