import numpy as np
import pytest

from qultimatum.classical_game import GameParams


@pytest.fixture
def params():
    return GameParams(delta=0.7, money=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
