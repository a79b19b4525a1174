"""Tests for run config parsing and the default worker count."""

import json

import pytest
from pypegasus import (
    clear_default_workers,
    dump_config,
    get_default_workers,
    parse_config,
    set_default_workers,
)
from pypegasus.config import (
    BicycleEvalParams,
    BicycleTrainParams,
    BoundsParams,
    GridworldParams,
    RunConfig,
)
from pypegasus.exceptions import ConfigError


def test_default_workers_is_one():
    """Without configuration, loops run on one worker."""
    assert get_default_workers() == 1


def test_set_and_clear_default_workers():
    """set_default_workers sets the count, clear resets it."""
    set_default_workers(8)
    assert get_default_workers() == 8

    clear_default_workers()
    assert get_default_workers() == 1


def test_set_default_workers_rejects_zero():
    """Zero workers is a config error on the 'threads' key."""
    with pytest.raises(ConfigError) as exc:
        set_default_workers(0)
    assert exc.value.key == "threads"


def test_parse_minimal_config():
    """A bare command gets all default params."""
    cfg = parse_config('{"command": "bounds", "seed": 1, "params": {}}')

    assert cfg.command == "bounds"
    assert cfg.seed == 1
    assert isinstance(cfg.params, BoundsParams)
    assert cfg.params.epsilon == 0.5
    assert cfg.output_path is None


def test_parse_gridworld_defaults():
    """Gridworld defaults match the experiment's published settings."""
    cfg = parse_config('{"command": "gridworld"}')

    assert isinstance(cfg.params, GridworldParams)
    assert cfg.params.m_values == [1, 5, 10, 30, 100]
    assert cfg.params.trials == 200
    assert cfg.params.h == 100
    assert cfg.params.gamma == 0.99
    assert cfg.params.variants == ["normal", "complex"]


def test_bicycle_defaults():
    """Bicycle config carries the 15 documented keys with their defaults."""
    cfg = parse_config('{"command": "bicycle-train"}')
    params = cfg.params

    assert isinstance(params, BicycleTrainParams)
    assert params.dt == 0.01
    assert params.noise_halfwidth == 0.02
    assert (params.tau_min, params.tau_max) == (-2.0, 2.0)
    assert (params.nu_min, params.nu_max) == (-0.02, 0.02)
    assert params.gamma == 0.998
    assert params.horizon == 500
    assert params.m_scenarios == 30
    assert params.goal_radius == 10.0
    assert params.training_mode is True
    assert params.seed is None


@pytest.mark.parametrize(
    "text,key",
    [
        pytest.param('{"command": "gridworld", "params": {"gama": 0.9}}', "params.gama", id="typo"),
        pytest.param(
            '{"command": "gridworld", "params": {"trials": 1}}', "params.trials", id="trials"
        ),
        pytest.param('{"command": "bounds", "colour": 1}', "colour", id="envelope_key"),
        pytest.param('{"command": "fly"}', "command", id="command"),
        pytest.param('{"command": "bounds", "seed": -1}', "seed", id="seed"),
    ],
)
def test_parse_rejects_bad_keys(text, key):
    """Unknown keys and bad values name the offending key."""
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.key == key
    assert key in str(exc.value)


def test_parse_rejects_invalid_json():
    """Syntax errors are config errors."""
    with pytest.raises(ConfigError, match="not valid JSON"):
        parse_config("{command: bounds")


def test_parse_rejects_non_object():
    """The document must be an object."""
    with pytest.raises(ConfigError):
        parse_config("[1, 2]")


def test_bicycle_bounds_must_be_ordered():
    """tau_min >= tau_max is rejected."""
    with pytest.raises(ConfigError):
        parse_config('{"command": "bicycle-eval", "params": {"tau_min": 3.0}}')


def test_bicycle_eval_weights_length():
    """bicycle-eval needs exactly 30 weights."""
    with pytest.raises(ConfigError):
        parse_config('{"command": "bicycle-eval", "params": {"weights": [1.0, 2.0]}}')
    cfg = parse_config('{"command": "bicycle-eval"}')
    assert isinstance(cfg.params, BicycleEvalParams)
    assert cfg.params.weights == [0.0] * 30


@pytest.mark.parametrize(
    "command",
    ["gridworld", "bicycle-train", "bicycle-eval", "counterexample", "bounds", "fidelity"],
)
def test_dump_then_parse_round_trip(command):
    """Serializing the effective config and parsing it back gives an equal config."""
    cfg = parse_config(json.dumps({"command": command, "seed": 5}))

    again = parse_config(dump_config(cfg))

    assert again == cfg
    assert dump_config(again) == dump_config(cfg)


def test_dump_includes_defaults():
    """The dump lists every effective param, defaults included."""
    dumped = json.loads(dump_config(parse_config('{"command": "bounds"}')))

    assert dumped["params"]["delta"] == 0.1
    assert dumped["params"]["h_eps"] is None


def test_with_overrides():
    """CLI flags override seed and output path."""
    cfg = parse_config('{"command": "bounds", "seed": 1}')

    out = cfg.with_overrides(seed=9, output_path="out.csv")

    assert isinstance(out, RunConfig)
    assert out.seed == 9
    assert out.output_path == "out.csv"
    assert cfg.seed == 1


def test_with_overrides_rejects_negative_seed():
    """Seeds must be 64-bit unsigned."""
    cfg = parse_config('{"command": "bounds"}')
    with pytest.raises(ConfigError):
        cfg.with_overrides(seed=-3)
