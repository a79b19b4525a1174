"""Tests for the Monte Carlo fidelity check."""

from __future__ import annotations

import logging
from collections import Counter

import pytest
from pypegasus import SimModel, draw_scenarios, fidelity_check, inverse_cdf_model, rollout
from pypegasus.envs.gridworld import RIGHT, analytic_distribution, gridworld_mdp, policy_from_index
from pypegasus.exceptions import DomainError
from pypegasus.fidelity import compare_counts
from pypegasus.tabular import state_distribution

TABLE = {"a": 0.2, "b": 0.5, "c": 0.3}


def _model_from(sampler):
    return SimModel(
        transition=lambda s, a, p: sampler(float(p[0])),
        reward=lambda s: 0.0,
        initial=lambda src: "a",
        gamma=0.9,
        r_max=1.0,
        d_P=1,
    )


def test_inverse_cdf_model_passes():
    """A model built straight from the table reproduces it."""
    report = fidelity_check(_model_from(inverse_cdf_model(TABLE)), "a", 0, TABLE, 100_000, seed=1)

    assert report.passed
    assert report.n == 100_000
    assert sum(report.counts.values()) == 100_000


def test_gridworld_passes(gridworld):
    """Every compass branch has the intended mass."""
    report = fidelity_check(gridworld, 6, RIGHT, analytic_distribution(6, RIGHT), 100_000)
    assert report.passed
    assert report.max_abs_z <= 3.0


def test_swapped_reference_fails(caplog):
    """Swapping two masses fails and logs a warning."""
    swapped = {"a": 0.5, "b": 0.2, "c": 0.3}
    with caplog.at_level(logging.WARNING):
        report = fidelity_check(_model_from(inverse_cdf_model(TABLE)), "a", 0, swapped, 10_000)

    assert not report.passed
    assert "max |z|" in report.diagnostic()
    assert "fidelity_check" in caplog.text


def test_unexpected_outcome_fails():
    """Any outcome outside the reference support fails, whatever the z-scores."""
    report = compare_counts({"a": 500, "b": 499, "z": 1}, {"a": 0.5, "b": 0.5}, 1000)

    assert not report.passed
    assert report.unexpected == {"z": 1}
    assert "outside reference support" in report.diagnostic()


def test_point_mass_reference():
    """A probability-1 outcome has zero variance and an exact count."""
    assert compare_counts({"a": 1000}, {"a": 1.0}, 1000).passed


def test_too_few_draws():
    """Fewer than 1000 draws is a domain error."""
    with pytest.raises(DomainError):
        fidelity_check(_model_from(inverse_cdf_model(TABLE)), "a", 0, TABLE, 999)


@pytest.mark.parametrize("step", [1, 2, 3])
def test_scenario_rollouts_match_tabular_distribution(gridworld, step):
    """States reached through scenarios follow the explicit MDP's step distribution."""
    n = 20_000
    policy = policy_from_index(4242)
    scenarios = draw_scenarios(gridworld, m=n, h=3, seed=17)
    counts = Counter(rollout(gridworld, policy, sc, 3).states[step] for sc in scenarios)

    dist = state_distribution(gridworld_mdp(), policy, step)
    reference = {s: float(q) for s, q in enumerate(dist) if q > 0}
    report = compare_counts(counts, reference, n)

    assert not report.unexpected
    assert report.max_abs_z <= 4.0
