"""Environments: the 5x5 gridworld and the bicycle."""

from pypegasus.envs.bicycle import (
    BicycleBatchEstimator,
    BikeAction,
    BikeState,
    BikeWeights,
    bike_step,
    build_bicycle_model,
    features,
    goal_entry_fraction,
    shaping_reward,
    sigmoid_policy,
)
from pypegasus.envs.gridworld import (
    GridBatchEstimator,
    build_gridworld,
    gridworld_experiment,
    gridworld_policy_class,
    wrap_complex,
)

__all__ = [
    "BicycleBatchEstimator",
    "BikeAction",
    "BikeState",
    "BikeWeights",
    "GridBatchEstimator",
    "bike_step",
    "build_bicycle_model",
    "build_gridworld",
    "features",
    "goal_entry_fraction",
    "gridworld_experiment",
    "gridworld_policy_class",
    "shaping_reward",
    "sigmoid_policy",
    "wrap_complex",
]
