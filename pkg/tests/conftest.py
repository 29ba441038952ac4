import numpy as np
import pytest

from hypcs.frames import adapted_frame, fermi_frame, tilted, twisted
from hypcs.scenarios import FuchsianStrip, Tube
from hypcs.spectral import ChartGrid


@pytest.fixture(scope="session")
def tube():
    return Tube(1.0, 2.0)


@pytest.fixture(scope="session")
def grid():
    return ChartGrid(16, 16)


@pytest.fixture(scope="session")
def collar(tube, grid):
    return tube.collar(grid)


@pytest.fixture(scope="session")
def fermi(collar, tube):
    return fermi_frame(collar, tube)


@pytest.fixture(scope="session")
def twist(fermi):
    return twisted(fermi, 1, 0)


@pytest.fixture(scope="session")
def tilt(fermi):
    return tilted(fermi, 0.3)


@pytest.fixture(scope="session")
def bumped():
    return Tube(1.0, 2.0, twist=0.3, bump=0.08, modes=(1, 1))


@pytest.fixture(scope="session")
def bumped_collar(bumped):
    return bumped.collar(ChartGrid(24, 24))


@pytest.fixture(scope="session")
def bumped_adapted(bumped_collar):
    return adapted_frame(bumped_collar)


@pytest.fixture(scope="session")
def strip():
    return FuchsianStrip(2.0, 1.0)


@pytest.fixture(scope="session")
def strip_collar(strip):
    return strip.collar(strip.grid(16, 24))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
