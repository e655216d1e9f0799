import os

import pytest

from check_config import check_config_file
from run import EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, main


def test_stability_verdict(capsys):
    assert main(["stability", "--beta", "0.9", "--c1", "0.8", "--c2", "0.9"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "stable"
    max_amplification = float(next(line for line in lines if line.startswith("max|A|")).split("=")[1])
    assert max_amplification <= 1.0


def test_stability_unstable_with_simulation(capsys):
    assert main(["stability", "--beta", "0.5", "--c1", "2.0", "--c2", "1.5", "--simulate", "200"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "unstable"
    assert "simulated" in out


def test_stability_scan(capsys):
    assert main(["stability", "--scan"]) == EXIT_OK
    # header plus a 19 x 19 table
    assert len(capsys.readouterr().out.splitlines()) == 1 + 19 * 19


def test_stability_needs_coefficients_without_scan():
    with pytest.raises(SystemExit) as exc:
        main(["stability", "--c1", "0.8", "--c2", "0.9"])
    assert exc.value.code == EXIT_VALIDATION


@pytest.mark.parametrize("steps", ["0", "-5", "many"])
def test_stability_simulate_needs_positive_steps(steps):
    with pytest.raises(SystemExit) as exc:
        main(["stability", "--beta", "0.9", "--c1", "0.8", "--c2", "0.9", "--simulate", steps])
    assert exc.value.code == EXIT_VALIDATION


def test_stability_single_simulated_step(capsys):
    assert main(["stability", "--beta", "0.9", "--c1", "0.8", "--c2", "0.9", "--simulate", "1"]) == EXIT_OK
    assert "simulated 1 steps" in capsys.readouterr().out


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as exc:
        main(["launch"])
    assert exc.value.code == EXIT_VALIDATION


def test_validate_rejects_unstable_config(write_config, tmp_path):
    path = write_config(problem="piab", beta=1.5, out_dir=tmp_path / "out")
    assert main(["validate", path]) == EXIT_VALIDATION


def test_validate_accepts_default_config(write_config, tmp_path, capsys):
    path = write_config(problem="piab", n=1, out_dir=tmp_path / "out")
    assert main(["validate", path]) == EXIT_OK
    assert "✅" in capsys.readouterr().out


def test_check_config_missing_file(tmp_path):
    assert check_config_file(str(tmp_path / "missing.cfg")) is False


def test_solve_writes_exports(write_config, tmp_path, capsys):
    out_dir = tmp_path / "out"
    path = write_config(problem="piab", n=1, grid_m=21, layers="1,4,1", swarm_size=6,
                        max_iters=10, seeds_best_of=1, out_dir=out_dir)
    assert main(["solve", path]) == EXIT_OK
    written = sorted(os.listdir(out_dir))
    for what in ("wavefunction", "losses", "probability", "energy"):
        assert f"{what}_seed0.csv" in written
    assert "record_seed0.json" in written
    assert "regularization.csv" in written
    assert "Learned energy" in capsys.readouterr().out


def test_solve_with_bad_config_is_validation_error(write_config):
    path = write_config(problem="piab", swarm_size="lots")
    assert main(["solve", path]) == EXIT_VALIDATION


def test_solve_runtime_failure(write_config, tmp_path, monkeypatch):
    import services.experiment_service as experiment_service

    def explode(*args, **kwargs):
        raise FloatingPointError("diverged")

    monkeypatch.setattr(experiment_service, "optimize", explode)
    path = write_config(problem="piab", grid_m=21, layers="1,4,1", swarm_size=4,
                        max_iters=5, seeds_best_of=1, out_dir=tmp_path / "out")
    assert main(["solve", path]) == EXIT_RUNTIME


def test_bench_command(capsys):
    assert main(["bench", "sphere", "--dim", "2", "--iters", "20", "--swarm-size", "10", "--seeds", "10"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "seed 0" in out and "seed 9" in out
    assert "median best" in out


def test_bench_with_too_few_seeds_is_validation_error():
    assert main(["bench", "sphere", "--dim", "2", "--iters", "5", "--seeds", "3"]) == EXIT_VALIDATION
