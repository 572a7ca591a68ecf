import numpy as np
import pytest

from twomode.config import DEFAULT_SETTINGS
from twomode.fock import TwoModeState
from twomode.states import EnsLabel, ens_state, tmsv


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def settings():
    return DEFAULT_SETTINGS


@pytest.fixture(scope="session")
def squeezed_vacuum():
    """``|0, 0; 0.5>`` on 40 levels per mode"""
    return tmsv(0.5, 40)


@pytest.fixture(scope="session")
def ens_31():
    """``|3, 1; 0.5>`` at the suggested cutoffs"""
    return ens_state(EnsLabel(3, 1, 0.5))


@pytest.fixture
def vacuum():
    return TwoModeState.fock(0, 0, 4, 4)
