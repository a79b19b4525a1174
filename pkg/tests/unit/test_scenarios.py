"""Tests for scenario drawing and the scenario text codec."""

from __future__ import annotations

import numpy as np
import pytest
from pypegasus import Scenario, draw_scenarios, dump_scenarios, load_scenarios
from pypegasus._internal._rng import UniformSource, raw_draws, stream_key, to_unit
from pypegasus.config import BicycleConfig
from pypegasus.envs.bicycle import BikeState, build_bicycle_model
from pypegasus.exceptions import DimensionMismatchError, DomainError
from pypegasus.scenarios import check_shape, draw_scenario


def test_same_seed_same_scenarios(gridworld):
    """Scenarios are a pure function of (seed, index)."""
    a = draw_scenarios(gridworld, m=5, h=10, seed=3)
    b = draw_scenarios(gridworld, m=5, h=10, seed=3)
    assert a == b
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.noise, y.noise)


def test_prefix_property(gridworld):
    """The first m scenarios do not depend on how many are drawn."""
    few = draw_scenarios(gridworld, m=3, h=10, seed=11)
    many = draw_scenarios(gridworld, m=30, h=10, seed=11)
    assert few == many[:3]


def test_different_seeds_differ(gridworld):
    """Another seed gives other noise."""
    a = draw_scenarios(gridworld, m=1, h=10, seed=1)[0]
    b = draw_scenarios(gridworld, m=1, h=10, seed=2)[0]
    assert a != b


def test_noise_follows_initial_draws():
    """Initial-state draws come first in the stream, then the noise row-major."""
    model = build_bicycle_model(BicycleConfig())
    sc = draw_scenario(model, h=4, seed=9, index=2)

    key = stream_key(9, 2)
    expected = to_unit(raw_draws(key, 5, 4)).reshape(4, 1)
    np.testing.assert_array_equal(sc.noise, expected)
    assert sc.initial_state == model.initial(UniformSource(key))


def test_noise_shape_and_range(gridworld):
    """Noise has shape (h, d_P) and lies in [0, 1)."""
    sc = draw_scenarios(gridworld, m=1, h=7, seed=0)[0]
    assert sc.noise.shape == (7, 1)
    assert sc.horizon == 7
    assert sc.width == 1
    assert np.all((sc.noise >= 0) & (sc.noise < 1))


def test_noise_is_read_only(gridworld):
    """Scenarios are immutable once drawn."""
    sc = draw_scenarios(gridworld, m=1, h=3, seed=0)[0]
    with pytest.raises(ValueError):
        sc.noise[0, 0] = 0.5


@pytest.mark.parametrize(
    "m,h",
    [
        pytest.param(0, 10, id="no_scenarios"),
        pytest.param(5, 0, id="no_steps"),
    ],
)
def test_draw_rejects_empty_sets(gridworld, m, h):
    """m and h must be at least 1."""
    with pytest.raises(DomainError):
        draw_scenarios(gridworld, m=m, h=h, seed=0)


def test_scenario_rejects_bad_noise():
    """Noise must be 2-D with entries in [0, 1]."""
    with pytest.raises(DimensionMismatchError):
        Scenario(initial_state=0, noise=np.zeros(3))
    with pytest.raises(DomainError):
        Scenario(initial_state=0, noise=np.full((2, 1), 1.5))


def test_check_shape(gridworld):
    """Scenarios shorter than h are rejected."""
    scenarios = draw_scenarios(gridworld, m=2, h=5, seed=0)
    check_shape(gridworld, scenarios, 5)
    with pytest.raises(DimensionMismatchError):
        check_shape(gridworld, scenarios, 6)


def test_text_codec_round_trip(gridworld):
    """Dumped scenarios load back bit for bit."""
    scenarios = draw_scenarios(gridworld, m=4, h=6, seed=21)
    text = dump_scenarios(scenarios)

    assert text.startswith("# scenarios m=4 h=6 d_P=1 state_fields=1\n")
    assert load_scenarios(text) == scenarios


def test_text_codec_with_custom_state():
    """Structured states go through encode/decode hooks."""
    model = build_bicycle_model(BicycleConfig())
    scenarios = draw_scenarios(model, m=2, h=3, seed=4)

    text = dump_scenarios(scenarios, encode=BikeState.to_fields)
    loaded = load_scenarios(text, decode=BikeState.from_fields)

    assert loaded == scenarios


def test_load_rejects_truncated_text(gridworld):
    """A missing record is a dimension mismatch."""
    text = dump_scenarios(draw_scenarios(gridworld, m=3, h=2, seed=0))
    truncated = "\n".join(text.splitlines()[:-1])
    with pytest.raises(DimensionMismatchError):
        load_scenarios(truncated)
    with pytest.raises(DomainError):
        load_scenarios("0.5 0.5\n")
