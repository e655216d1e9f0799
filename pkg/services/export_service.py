"""
CSV export of run records.

Each series goes to its own file with a header row; numbers are written with
12 significant digits so the files can be re-parsed without loss that
matters for plotting or comparison.
"""
import logging
import math
import os
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from services.config_service import PROBLEM_BVP, PROBLEM_PIAB
from services.experiment_service import RunRecord
from solver.numerics import SampledFunction, make_grid
from solver.schrodinger import (
    analytic_wavefunction,
    regularization,
    regularization_derivative,
)

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
EXPORT_KINDS = ("wavefunction", "losses", "probability", "energy")

# which exports each problem kind supports
SUPPORTED_EXPORTS: Dict[str, Sequence[str]] = {
    PROBLEM_PIAB: EXPORT_KINDS,
    PROBLEM_BVP: ("wavefunction", "losses", "probability"),
}
BENCH_EXPORTS = ("losses",)

REGULARIZATION_CSV = "regularization.csv"
# p from 0.1 to 2.0 in steps of 0.01
REGULARIZATION_CURVE_P = tuple(float(p) for p in np.round(np.linspace(0.1, 2.0, 191), 2))


class ExportError(Exception):
    """Custom exception for CSV export failures"""
    pass


def available_exports(record: RunRecord) -> Sequence[str]:
    return SUPPORTED_EXPORTS.get(record.problem, BENCH_EXPORTS)


def _wavefunction_frame(record: RunRecord) -> pd.DataFrame:
    nodes = np.asarray(record.grid_nodes)
    psi_hat = np.asarray(record.wavefunction)
    if record.problem != PROBLEM_PIAB:
        return pd.DataFrame({
            "x": nodes,
            "psi_hat": psi_hat,
            "psi_analytic": np.full(nodes.shape, math.nan),
            "abs_error_phase_aligned": np.full(nodes.shape, math.nan),
        })

    grid = make_grid(nodes[0], nodes[-1], len(nodes))
    psi_ref = analytic_wavefunction(record.config["n"], record.config["box_length"], grid).values
    # same sign choice as phase_aligned_error
    errors = {sign: np.abs(sign * psi_hat - psi_ref) for sign in (1.0, -1.0)}
    sign = min(errors, key=lambda s: float(np.max(errors[s])))
    return pd.DataFrame({
        "x": nodes,
        "psi_hat": psi_hat,
        "psi_analytic": psi_ref,
        "abs_error_phase_aligned": errors[sign],
    })


def _history_frame(record: RunRecord, columns: List[str]) -> pd.DataFrame:
    frame = pd.DataFrame({"iteration": record.history["iteration"]})
    for column in columns:
        frame[column] = record.history[column]
    return frame


def build_frame(record: RunRecord, what: str) -> pd.DataFrame:
    if what not in EXPORT_KINDS:
        raise ExportError(f"Unknown export '{what}', expected one of {EXPORT_KINDS}")
    if what not in available_exports(record):
        raise ExportError(f"A {record.problem} record has no '{what}' series")

    if what == "wavefunction":
        return _wavefunction_frame(record)
    if what == "losses":
        return _history_frame(record, ["total_loss", "residual_integral", "regularization"])
    if what == "probability":
        return _history_frame(record, ["probability"]).rename(columns={"probability": "p"})
    return _history_frame(record, ["energy"]).rename(columns={"energy": "E"})


def export_csv(record: RunRecord, what: str, out_dir: str) -> str:
    """
    Write one series of a record as CSV.

    Args:
        record: The run record
        what: One of wavefunction, losses, probability, energy
        out_dir: Directory for the file

    Returns:
        Path of the written file

    Raises:
        ExportError: If the series is unavailable or the file cannot be written
    """
    frame = build_frame(record, what)
    path = os.path.join(out_dir, f"{what}_seed{record.seed}.csv")
    try:
        os.makedirs(out_dir, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise ExportError(f"Failed to write {path}: {e}") from e
    logger.info(f"Exported {what} ({len(frame)} rows) to {path}")
    return path


def export_all(record: RunRecord, out_dir: str) -> List[str]:
    """Every series the record supports, plus the R(p) curve for piab records."""
    paths = [export_csv(record, what, out_dir) for what in available_exports(record)]
    if record.problem == PROBLEM_PIAB:
        paths.append(export_regularization_curve(os.path.join(out_dir, REGULARIZATION_CSV)))
    return paths


def export_regularization_curve(path: str, p_values: Sequence[float] = REGULARIZATION_CURVE_P) -> str:
    """Write R(p) and dR/dp at the given (positive) probabilities."""
    frame = pd.DataFrame({
        "p": list(p_values),
        "R": [regularization(p) for p in p_values],
        "dR_dp": [regularization_derivative(p) for p in p_values],
    })
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise ExportError(f"Failed to write {path}: {e}") from e
    return path


def read_wavefunction(path: str) -> SampledFunction:
    """Re-parse an exported wavefunction into a sampled function."""
    frame = pd.read_csv(path)
    nodes = frame["x"].to_numpy()
    grid = make_grid(nodes[0], nodes[-1], len(nodes))
    return SampledFunction(grid, frame["psi_hat"].to_numpy())
