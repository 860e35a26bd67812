import numpy as np
import pytest

import capmimo as cm


@pytest.fixture(scope="session")
def scenario():
    return cm.default_scenario()


@pytest.fixture(scope="session")
def grid(scenario):
    return cm.build_grid(scenario.aperture, scenario.grid_nx, scenario.grid_ny)


@pytest.fixture(scope="session")
def channels(scenario, grid):
    return np.stack([cm.channel_samples(u, grid, scenario.wave) for u in scenario.users])


@pytest.fixture(scope="session")
def basis(scenario, grid):
    return cm.FourierBasis(scenario.order, scenario.aperture, grid)


@pytest.fixture(scope="session")
def omega(basis, channels):
    return basis.channel_spectrum(channels)
