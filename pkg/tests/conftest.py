import numpy as np
import pytest

from complexaction import GaussianWavepacket, Morse
from complexaction.config import load_config
from complexaction.runs import fan_for


@pytest.fixture(scope="session")
def morse():
    return Morse(10.25, 0.2209)


@pytest.fixture(scope="session")
def morse_packet():
    return GaussianWavepacket(alpha0=0.5, xc=9.342, pc=0.0)


@pytest.fixture(scope="session")
def fig3_config():
    return load_config("fig3")


@pytest.fixture(scope="session")
def fig3_fan(fig3_config):
    return fan_for(fig3_config)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
