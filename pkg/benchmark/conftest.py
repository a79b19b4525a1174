"""Shared fixtures for benchmarks.

Scenario sets are drawn once per session so every benchmark scores the
same pinned noise.
"""

import numpy as np
import pytest
from pypegasus import draw_scenarios
from pypegasus.config import BicycleConfig
from pypegasus.envs.bicycle import BicycleBatchEstimator, build_bicycle_model
from pypegasus.envs.gridworld import GridBatchEstimator, build_gridworld, wrap_complex

GRID_M = 30
GRID_H = 100
BIKE_M = 10
BIKE_H = 200


@pytest.fixture(scope="session")
def gridworld():
    return build_gridworld()


@pytest.fixture(scope="session")
def gridworld_complex(gridworld):
    return wrap_complex(gridworld, seed=0)


@pytest.fixture(scope="session")
def grid_scenarios(gridworld):
    return draw_scenarios(gridworld, GRID_M, GRID_H, seed=1)


@pytest.fixture(scope="session")
def grid_estimator(gridworld, grid_scenarios):
    """Vectorized gridworld estimator on the session scenarios."""
    return GridBatchEstimator(gridworld, grid_scenarios, GRID_H)


@pytest.fixture(scope="session")
def bike_config():
    return BicycleConfig(horizon=BIKE_H)


@pytest.fixture(scope="session")
def bike_model(bike_config):
    return build_bicycle_model(bike_config)


@pytest.fixture(scope="session")
def bike_scenarios(bike_model):
    return draw_scenarios(bike_model, BIKE_M, BIKE_H, seed=2)


@pytest.fixture(scope="session")
def bike_estimator(bike_config, bike_scenarios):
    return BicycleBatchEstimator(bike_config, bike_scenarios, BIKE_H)


@pytest.fixture(scope="session")
def bike_theta():
    return np.random.default_rng(0).normal(scale=0.3, size=30)
