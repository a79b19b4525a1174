"""
Benchmark suite comparing the generic rollout estimator with the vectorized ones.

Run with: uv run pytest benchmark/benchmark.py -v --benchmark-only
"""

import numpy as np
import pytest
from pypegasus import estimate_value, exhaustive_search, numerical_gradient
from pypegasus.envs.bicycle import bike_policy
from pypegasus.envs.gridworld import (
    GridBatchEstimator,
    exact_policy_values,
    gridworld_policy_class,
    policy_from_index,
)

GRID_H = 100
BIKE_H = 200

POLICIES = [0, 4242, 21845, 65535]


# =============================================================================
# GRIDWORLD: ONE POLICY
# =============================================================================


def test_gridworld_rollout_estimate(benchmark, gridworld, grid_scenarios):
    """Benchmark estimate_value - 4 policies, one thread."""

    def run():
        for idx in POLICIES:
            estimate_value(gridworld, policy_from_index(idx), grid_scenarios, GRID_H, workers=1)

    benchmark(run)


def test_gridworld_batch_estimate(benchmark, grid_estimator):
    """Benchmark GridBatchEstimator - same 4 policies."""

    def run():
        for idx in POLICIES:
            grid_estimator(policy_from_index(idx))

    benchmark(run)


# =============================================================================
# GRIDWORLD: WHOLE CLASS
# =============================================================================


def test_gridworld_exhaustive_search(benchmark, grid_estimator):
    """Benchmark exhaustive_search over all 65536 policies."""
    report = benchmark.pedantic(
        exhaustive_search, args=(grid_estimator, gridworld_policy_class()), rounds=3
    )
    assert report.evaluations == 65536


def test_gridworld_complex_exhaustive_search(benchmark, gridworld_complex, grid_scenarios):
    """Benchmark exhaustive_search on the hashed model."""
    estimator = GridBatchEstimator(gridworld_complex, grid_scenarios, GRID_H)
    benchmark.pedantic(exhaustive_search, args=(estimator, gridworld_policy_class()), rounds=3)


def test_gridworld_exact_sweep(benchmark):
    """Benchmark the exact linear-solve sweep over all 65536 policies."""
    values = benchmark.pedantic(exact_policy_values, rounds=3)
    assert values.shape == (65536,)


# =============================================================================
# BICYCLE
# =============================================================================


@pytest.mark.parametrize("workers", [1, 4])
def test_bicycle_rollout_estimate(
    benchmark, bike_config, bike_model, bike_scenarios, bike_theta, workers
):
    """Benchmark estimate_value on the bicycle."""
    policy = bike_policy(bike_theta, bike_config)
    benchmark(estimate_value, bike_model, policy, bike_scenarios, BIKE_H, workers=workers)


def test_bicycle_batch_estimate(benchmark, bike_estimator, bike_theta):
    """Benchmark BicycleBatchEstimator on one weight vector."""
    benchmark(bike_estimator, bike_theta)


def test_bicycle_batch_many(benchmark, bike_estimator, bike_theta):
    """Benchmark 61 weight vectors in one call (a full central-difference gradient)."""
    thetas = np.vstack([bike_theta] * 61)
    benchmark(bike_estimator.evaluate_many, thetas)


def test_bicycle_numerical_gradient(benchmark, bike_estimator, bike_theta):
    """Benchmark numerical_gradient through the batch estimator."""
    benchmark(numerical_gradient, bike_estimator, bike_theta, 1e-3)
