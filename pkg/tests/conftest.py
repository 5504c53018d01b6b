# tests/conftest.py
import pytest
import numpy as np
from click.testing import CliRunner
from dotenv import load_dotenv

from central_spin.model_utils import ModelConfig, random_config
from dissipation.dissipation_utils import DissipativeMode

# Load environment
load_dotenv()


@pytest.fixture
def rng():
    """Seeded generator shared by randomized tests"""
    return np.random.default_rng(20240611)


@pytest.fixture
def random_model(rng):
    """Random two-auxiliary model at the default experiment settings (mu=1, gamma=100)"""
    return random_config(2, rng, mu=1.0, gamma=100.0)


@pytest.fixture
def polarizing_model():
    """
    One auxiliary qubit pumped into |0>, isotropic exchange coupling.
    The central qubit relaxes to |0><0| at rate 16/gamma.
    """
    return ModelConfig(
        couplings=(np.eye(3),),
        modes=(DissipativeMode(theta=0.0, phi=0.0, mu=1.0),),
        gamma=100.0,
    )


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def run_file(tmp_path):
    """Write a run file; OUT_DIR defaults to tmp_path/out"""

    def _write(**values):
        values.setdefault('OUT_DIR', str(tmp_path / 'out'))
        path = tmp_path / 'run.env'
        path.write_text(''.join(f"{key}={value}\n" for key, value in values.items()))
        return path

    return _write
