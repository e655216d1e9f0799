import math
import os

import numpy as np
import pandas as pd
import pytest

from services.export_service import (
    ExportError,
    available_exports,
    export_all,
    export_csv,
    export_regularization_curve,
    read_wavefunction,
)


def test_wavefunction_csv(piab_record, tmp_path):
    path = export_csv(piab_record, "wavefunction", str(tmp_path))
    assert os.path.basename(path) == f"wavefunction_seed{piab_record.seed}.csv"

    frame = pd.read_csv(path)
    assert list(frame.columns) == ["x", "psi_hat", "psi_analytic", "abs_error_phase_aligned"]
    assert len(frame) == 21
    assert frame["psi_analytic"].iloc[0] == pytest.approx(0.0, abs=1e-12)
    assert frame["psi_analytic"].iloc[10] == pytest.approx(math.sqrt(2.0), rel=1e-11)
    assert (frame["abs_error_phase_aligned"] >= 0).all()


def test_wavefunction_round_trip(piab_record, tmp_path):
    psi = read_wavefunction(export_csv(piab_record, "wavefunction", str(tmp_path)))
    np.testing.assert_allclose(psi.values, piab_record.wavefunction, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(psi.grid.nodes, piab_record.grid_nodes, atol=1e-12)


def test_losses_csv(piab_record, tmp_path):
    frame = pd.read_csv(export_csv(piab_record, "losses", str(tmp_path)))
    assert list(frame.columns) == ["iteration", "total_loss", "residual_integral", "regularization"]
    assert frame["iteration"].is_monotonic_increasing and frame["iteration"].is_unique
    assert len(frame) == len(piab_record.history["iteration"])


def test_probability_and_energy_csv(piab_record, tmp_path):
    probability = pd.read_csv(export_csv(piab_record, "probability", str(tmp_path)))
    energy = pd.read_csv(export_csv(piab_record, "energy", str(tmp_path)))
    assert list(probability.columns) == ["iteration", "p"]
    assert list(energy.columns) == ["iteration", "E"]
    assert energy["E"].iloc[-1] == pytest.approx(piab_record.energy, rel=1e-11)


def test_export_all_for_piab(piab_record, tmp_path):
    paths = export_all(piab_record, str(tmp_path))
    expected = [f"{what}_seed{piab_record.seed}.csv" for what in ("wavefunction", "losses", "probability", "energy")]
    assert sorted(os.path.basename(p) for p in paths) == sorted(expected + ["regularization.csv"])
    curve = pd.read_csv(tmp_path / "regularization.csv")
    assert curve["p"].iloc[0] == pytest.approx(0.1)
    assert curve["p"].iloc[-1] == pytest.approx(2.0)
    assert curve.loc[curve["p"].round(2) == 1.0, "R"].iloc[0] == pytest.approx(51.875)


def test_bench_record_skips_regularization_curve(bench_record, tmp_path):
    paths = export_all(bench_record, str(tmp_path))
    assert [os.path.basename(p) for p in paths] == [f"losses_seed{bench_record.seed}.csv"]


def test_bench_record_has_losses_only(bench_record, tmp_path):
    assert list(available_exports(bench_record)) == ["losses"]
    with pytest.raises(ExportError):
        export_csv(bench_record, "wavefunction", str(tmp_path))


def test_unknown_export(piab_record, tmp_path):
    with pytest.raises(ExportError):
        export_csv(piab_record, "spectrum", str(tmp_path))


def test_regularization_curve(tmp_path):
    path = export_regularization_curve(str(tmp_path / "regularization.csv"), [0.5, 1.0, 2.0])
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["p", "R", "dR_dp"]
    assert frame["R"].iloc[1] == pytest.approx(51.875)
    assert frame["R"].iloc[2] == pytest.approx(80.694010417, abs=1e-8)
    assert frame["dR_dp"].iloc[1] == pytest.approx(0.0, abs=1e-9)
