import pytest

from services.config_service import config_from_mapping
from services.experiment_service import run_experiment
from solver.numerics import make_grid


@pytest.fixture
def unit_grid():
    return make_grid(0.0, 1.0, 101)


@pytest.fixture
def write_config(tmp_path):
    """Write key=value pairs to a config file and return its path."""
    def _write(name="run.cfg", **values):
        path = tmp_path / name
        path.write_text("".join(f"{key}={value}\n" for key, value in values.items()))
        return str(path)
    return _write


def tiny_piab_settings(out_dir, **overrides):
    settings = {
        "problem": "piab",
        "n": "1",
        "grid_m": "21",
        "layers": "1,4,1",
        "swarm_size": "6",
        "max_iters": "20",
        "history_stride": "5",
        "seeds_best_of": "1",
        "out_dir": str(out_dir),
    }
    settings.update({key: str(value) for key, value in overrides.items()})
    return settings


@pytest.fixture
def piab_settings(tmp_path):
    """Settings for a piab run small enough to finish in well under a second."""
    def _settings(**overrides):
        return tiny_piab_settings(tmp_path / "runs", **overrides)
    return _settings


@pytest.fixture
def tiny_piab_config(tmp_path):
    return config_from_mapping(tiny_piab_settings(tmp_path / "runs"))


@pytest.fixture(scope="session")
def piab_record(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("piab_record")
    return run_experiment(config_from_mapping(tiny_piab_settings(out_dir)))


@pytest.fixture(scope="session")
def bench_record(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("bench_record")
    config = config_from_mapping({
        "problem": "bench:sphere",
        "dim": "5",
        "swarm_size": "10",
        "max_iters": "50",
        "history_stride": "10",
        "out_dir": str(out_dir),
    })
    return run_experiment(config)
