"""Tests for exact values of tabular MDPs."""

from __future__ import annotations

import numpy as np
import pytest
from pypegasus import ConstantPolicy, TabularMDP, exact_value_tabular, exact_values_batch
from pypegasus.exceptions import DimensionMismatchError, DomainError, InvalidDistributionError
from pypegasus.tabular import state_distribution


def _self_loop():
    """One state, one action, reward 1, never absorbed."""
    return TabularMDP(
        transitions=np.ones((1, 1, 1)),
        rewards=np.array([1.0]),
        initial=np.array([1.0]),
        absorbing=np.array([False]),
    )


def _one_step():
    """State 0 (R = -1) moves to the absorbing goal 1 (R = 0)."""
    P = np.zeros((2, 1, 2))
    P[:, 0, 1] = 1.0
    return TabularMDP(
        transitions=P,
        rewards=np.array([-1.0, 0.0]),
        initial=np.array([1.0, 0.0]),
        absorbing=np.array([False, True]),
    )


def test_self_loop_value():
    """R = 1 forever at gamma 0.5 is worth 2."""
    assert exact_value_tabular(_self_loop(), ConstantPolicy(0), 0.5) == pytest.approx(2.0)


def test_one_step_to_goal():
    """Paying -1 once before the goal is worth -1."""
    assert exact_value_tabular(_one_step(), ConstantPolicy(0), 0.9) == pytest.approx(-1.0)


def test_truncated_value():
    """h transitions collect h + 1 rewards."""
    assert exact_value_tabular(_self_loop(), ConstantPolicy(0), 0.5, h=0) == 1.0
    assert exact_value_tabular(_self_loop(), ConstantPolicy(0), 0.5, h=2) == pytest.approx(1.75)


def test_truncated_approaches_solve():
    """The truncated value converges to the solved one."""
    from pypegasus.envs.gridworld import gridworld_mdp, policy_from_index

    mdp = gridworld_mdp()
    policy = policy_from_index(4242)
    solved = exact_value_tabular(mdp, policy, 0.99)
    truncated = exact_value_tabular(mdp, policy, 0.99, h=3000)
    assert truncated == pytest.approx(solved, abs=1e-9)


def test_batch_matches_single():
    """exact_values_batch agrees with one-at-a-time calls."""
    from pypegasus.envs.gridworld import (
        POLICY_DIGITS,
        cell_action_tables,
        gridworld_mdp,
        policy_from_index,
    )

    mdp = gridworld_mdp()
    indices = [0, 1, 300, 65535]
    batch = exact_values_batch(mdp, cell_action_tables(POLICY_DIGITS[indices]), 0.99)
    single = [exact_value_tabular(mdp, policy_from_index(i), 0.99) for i in indices]
    np.testing.assert_allclose(batch, single, atol=1e-10)


@pytest.mark.parametrize(
    "row",
    [
        pytest.param([0.5, 0.4], id="short"),
        pytest.param([0.7, 0.4], id="long"),
        pytest.param([1.1, -0.1], id="negative"),
    ],
)
def test_bad_rows(row):
    """Rows must be distributions."""
    with pytest.raises(InvalidDistributionError):
        TabularMDP(
            transitions=np.array([[row], [row]]),
            rewards=np.zeros(2),
            initial=np.array([1.0, 0.0]),
            absorbing=np.zeros(2, dtype=bool),
        )


def test_shape_errors():
    """Mismatched reward length and action tables are rejected."""
    with pytest.raises(DimensionMismatchError):
        TabularMDP(
            transitions=np.ones((1, 1, 1)),
            rewards=np.zeros(2),
            initial=np.array([1.0]),
            absorbing=np.array([False]),
        )
    with pytest.raises(DimensionMismatchError):
        exact_values_batch(_one_step(), np.zeros((1, 3), dtype=np.int64), 0.5)


def test_gamma_domain():
    """gamma must be in [0, 1)."""
    with pytest.raises(DomainError):
        exact_value_tabular(_self_loop(), ConstantPolicy(0), 1.0)


def test_to_sim_model_matches():
    """The inverse-CDF model of an MDP has the same next-state support."""
    model = _one_step().to_sim_model(gamma=0.9)
    assert model.transition(0, 0, np.array([0.3])) == 1
    assert model.absorbing(1)
    assert model.reward(0) == -1.0


def test_state_distribution_absorbs():
    """Mass ends up in the absorbing state and stays there."""
    dist = state_distribution(_one_step(), ConstantPolicy(0), 5)
    np.testing.assert_allclose(dist, [0.0, 1.0])
