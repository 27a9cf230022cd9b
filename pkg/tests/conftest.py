import numpy as np
import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.schemas.frame import ModelParams, ScalingFrame
from app.schemas.simulation import SimulationConfig

TEST_SEED = 12345


@pytest.fixture(scope="function")
def client():
    """Test client for the FastAPI application."""
    yield TestClient(app)


@pytest.fixture
def rng():
    """Seeded generator so statistical assertions are reproducible."""
    return np.random.default_rng(TEST_SEED)


@pytest.fixture
def stationary_params():
    return ModelParams(lam=1.0, rho=1.0)


@pytest.fixture
def small_frame():
    """Short time and a single label: eight particles, cheap to simulate."""
    return ScalingFrame(t=8.0, delta=0.0, r_list=[0.0])


@pytest.fixture
def two_label_frame():
    return ScalingFrame(t=8.0, delta=0.0, r_list=[0.0, 0.5])


@pytest.fixture
def coarse_grid():
    return SimulationConfig(time_steps=40, batch_size=4)


@pytest.fixture
def formula_frame():
    """Frame for formula-only work; t only enters through rho."""
    return ScalingFrame(t=1e6, delta=0.5, r_list=[0.0])
