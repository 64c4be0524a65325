import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from friedrichs import LevelShift, ModelParams, assemble_hamiltonian, discretize_preset, find_pole  # noqa: E402
from friedrichs.harness import load_config, run_correlation, run_emission, run_survival  # noqa: E402


@pytest.fixture(scope="session")
def params():
    return ModelParams()


@pytest.fixture(scope="session")
def levelshift(params):
    return LevelShift(params)


@pytest.fixture(scope="session")
def pole(levelshift):
    return find_pole(levelshift)


@pytest.fixture(scope="session")
def preset_model():
    dm = discretize_preset("paper")
    return dm, assemble_hamiltonian(dm)


@pytest.fixture(scope="session")
def cfg():
    return load_config()


@pytest.fixture(scope="session")
def survival_report(cfg):
    return run_survival(cfg)


@pytest.fixture(scope="session")
def emission_report(cfg):
    return run_emission(cfg)


@pytest.fixture(scope="session")
def correlation_report(cfg):
    return run_correlation(cfg)
