import numpy as np
import pytest

from hbce.engine import ModelConfig, init_model
from hbce.taxonomy import default_taxonomy


@pytest.fixture(scope="session")
def default_tax():
    return default_taxonomy()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tiny_model():
    """4x4 input, 2 labels: small enough for exhaustive finite differences."""
    cfg = ModelConfig(4, 4, 2, conv_filters=3, conv_kernel=3, dense_units=5, dropout_rate=0.5)
    return init_model(cfg, seed=7)
