import numpy as np
import pytest

from hetcoord import NetworkConfig, ReceivedPowerModel, build_topology, draw_channels


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def default_config():
    return NetworkConfig()


@pytest.fixture
def small_topology(default_config):
    # one macro + two microcells, fixed seed
    return build_topology(default_config, np.random.default_rng(7))


@pytest.fixture
def small_realization(default_config, small_topology):
    model = ReceivedPowerModel.from_config(default_config)
    return draw_channels(small_topology, model, np.random.default_rng(8))
