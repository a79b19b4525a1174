"""Property-based tests for horizons, scenarios and the value estimator.

**Property: Horizon Time Is Minimal**
For any epsilon, gamma and r_max, the tail after ``horizon_time`` is at most
epsilon/2 and the tail one step earlier is not.

**Property: Scenario Prefix**
Drawing ``m`` scenarios gives the first ``m`` of any larger draw with the same seed.

**Property: Common Random Numbers**
On one pinned scenario set, estimates are deterministic and independent of
the worker count.
"""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from pypegasus import draw_scenarios, estimate_value, horizon_time
from pypegasus._internal._rng import UniformSource, stream_key
from pypegasus.envs.gridworld import build_gridworld, policy_from_index

GRIDWORLD = build_gridworld()


@settings(max_examples=500)
@given(
    st.floats(min_value=1e-6, max_value=100.0),
    st.floats(min_value=0.0, max_value=0.999),
    st.floats(min_value=1e-3, max_value=100.0),
)
def test_horizon_time_is_minimal(epsilon, gamma, r_max):
    H = horizon_time(epsilon, gamma, r_max)
    assert gamma**H * r_max / (1 - gamma) <= epsilon / 2
    if H > 0:
        assert gamma ** (H - 1) * r_max / (1 - gamma) > epsilon / 2


@settings(max_examples=50)
@given(
    st.integers(min_value=0, max_value=2**64 - 1),
    st.integers(min_value=1, max_value=20),
    st.integers(min_value=1, max_value=20),
)
def test_scenario_prefix(seed, m, extra):
    small = draw_scenarios(GRIDWORLD, m, 10, seed)
    large = draw_scenarios(GRIDWORLD, m + extra, 10, seed)
    assert small == large[:m]


@settings(max_examples=100)
@given(st.integers(min_value=0, max_value=2**64 - 1), st.integers(min_value=0, max_value=1000))
def test_uniform_source_stays_in_unit_interval(seed, n):
    values = UniformSource(stream_key(seed, 0)).uniforms(n)
    assert values.shape == (n,)
    assert np.all((values >= 0.0) & (values < 1.0))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=65535), st.integers(min_value=0, max_value=2**32))
def test_estimate_is_deterministic(index, seed):
    scenarios = draw_scenarios(GRIDWORLD, 8, 40, seed)
    policy = policy_from_index(index)
    first = estimate_value(GRIDWORLD, policy, scenarios, 40, workers=1)
    second = estimate_value(GRIDWORLD, policy, scenarios, 40, workers=4)

    assert first.value == second.value
    assert -1.0 / (1 - 0.99) <= first.value <= 0.0
