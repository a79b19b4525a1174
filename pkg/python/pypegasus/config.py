"""Run configuration.

Two kinds of configuration live here:

- the process-wide worker count (``set_default_workers`` and friends), used by
  every parallel loop in the package;
- the pydantic models the CLI validates its JSON config against. Every model
  forbids unknown keys, so a typo like ``"gama"`` is an error, not a silent default.
"""

from __future__ import annotations

import json
import math
from typing import Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    SerializeAsAny,
    ValidationError,
    model_validator,
)

from pypegasus.exceptions import ConfigError

# Global default worker count
_default_workers: int = 1


def set_default_workers(workers: int) -> None:
    """Set how many threads parallel loops may use.

    Results never depend on this value, only wall time does.

    Args:
        workers: Thread count, at least 1.

    Example:
        >>> from pypegasus import set_default_workers
        >>> set_default_workers(8)
    """
    global _default_workers
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}", key="threads")
    _default_workers = workers


def get_default_workers() -> int:
    """Get the default worker count (1 unless set)."""
    return _default_workers


def clear_default_workers() -> None:
    """Reset the worker count to 1.

    Useful for testing to reset state between tests.
    """
    global _default_workers
    _default_workers = 1


Command = Literal[
    "gridworld", "bicycle-train", "bicycle-eval", "counterexample", "bounds", "fidelity"
]

U64_MAX = 2**64 - 1


class ParamsBase(BaseModel):
    """Base for command parameter objects."""

    model_config = ConfigDict(extra="forbid", frozen=True)


class GridworldParams(ParamsBase):
    """Parameters of the ``gridworld`` command."""

    m_values: list[int] = Field(default_factory=lambda: [1, 5, 10, 30, 100], min_length=1)
    trials: int = Field(200, ge=2)
    h: int = Field(100, ge=1)
    gamma: float = Field(0.99, ge=0.0, lt=1.0)
    variants: list[Literal["normal", "complex"]] = Field(
        default_factory=lambda: ["normal", "complex"], min_length=1
    )

    @model_validator(mode="after")
    def _positive_m(self) -> GridworldParams:
        if any(m < 1 for m in self.m_values):
            raise ValueError("every entry of m_values must be >= 1")
        return self


class BicycleConfig(ParamsBase):
    """Flat bicycle configuration.

    Args:
        dt: Integration step in seconds.
        noise_halfwidth: Half-width of the uniform noise added to the rider displacement (m).
        tau_min: Lower handlebar torque bound (N m).
        tau_max: Upper handlebar torque bound (N m).
        nu_min: Lower rider displacement bound (m).
        nu_max: Upper rider displacement bound (m).
        shaping_scale: Reward per metre of progress toward the goal.
        fall_penalty: Reward on the step the bicycle falls.
        gamma: Discount factor.
        horizon: Steps per rollout.
        m_scenarios: Scenarios in the pinned training set.
        goal_radius: Radius of the goal disc (m).
        goal_distance: Distance from the start to the goal centre (m).
        training_mode: Goal infinitely far away along +x (no goal entry).
        seed: Scenario seed. None means the run seed.
    """

    dt: float = Field(0.01, gt=0.0)
    noise_halfwidth: float = Field(0.02, ge=0.0)
    tau_min: float = -2.0
    tau_max: float = 2.0
    nu_min: float = -0.02
    nu_max: float = 0.02
    shaping_scale: float = 0.1
    fall_penalty: float = -1.0
    gamma: float = Field(0.998, ge=0.0, lt=1.0)
    horizon: int = Field(500, ge=1)
    m_scenarios: int = Field(30, ge=1)
    goal_radius: float = Field(10.0, gt=0.0)
    goal_distance: float = Field(1000.0, gt=0.0)
    training_mode: bool = True
    seed: int | None = Field(None, ge=0, le=U64_MAX)

    @model_validator(mode="after")
    def _ordered_bounds(self) -> BicycleConfig:
        if not self.tau_min < self.tau_max:
            raise ValueError("tau_min must be < tau_max")
        if not self.nu_min < self.nu_max:
            raise ValueError("nu_min must be < nu_max")
        if not all(math.isfinite(v) for v in (self.shaping_scale, self.fall_penalty)):
            raise ValueError("shaping_scale and fall_penalty must be finite")
        return self


class BicycleTrainParams(BicycleConfig):
    """``bicycle-train``: the bicycle config plus optimizer settings.

    ``population`` is the number of hill-climbing proposals scored per iteration.
    """

    optimizer: Literal["hill_climb", "gradient"] = "hill_climb"
    iters: int = Field(150, ge=1)
    perturb_scale: float = Field(0.5, gt=0.0)
    population: int = Field(16, ge=1)
    step_size: float = Field(1.0, gt=0.0)
    clamp: float = Field(1.0, gt=0.0)
    grad_step: float = Field(1e-3, gt=0.0)
    eval_rides: int = Field(50, ge=1)


class BicycleEvalParams(BicycleConfig):
    """``bicycle-eval``: ride a fixed weight vector (30 numbers, w1 then w2)."""

    weights: list[float] = Field(default_factory=lambda: [0.0] * 30)
    rides: int = Field(50, ge=1)

    @model_validator(mode="after")
    def _weights_shape(self) -> BicycleEvalParams:
        if len(self.weights) != 30:
            raise ValueError(f"weights must have 30 entries, got {len(self.weights)}")
        return self


class CounterexampleParams(ParamsBase):
    """``counterexample``: adversarial union demo or the simple threshold contrast."""

    m: int = Field(100, ge=1)
    h: int = Field(2, ge=1)
    variant: Literal["adversarial", "simple"] = "adversarial"
    candidates: int = Field(100, ge=1)


class BoundsParams(ParamsBase):
    """``bounds``: inputs of the sample-complexity calculators."""

    epsilon: float = Field(0.5, gt=0.0)
    delta: float = Field(0.1, gt=0.0, lt=1.0)
    d: int = Field(1, ge=0)
    d_S: int = Field(1, ge=1)
    d_P: int = Field(1, ge=1)
    B: float = Field(1.0, ge=1.0)
    B_R: float = Field(1.0, ge=1.0)
    m_big: float = Field(1.0, gt=0.0)
    gamma: float = Field(0.5, ge=0.0, lt=1.0)
    h_eps: int | None = Field(None, ge=0)


class FidelityParams(ParamsBase):
    """``fidelity``: Monte Carlo check of every gridworld (cell, action) pair."""

    n: int = Field(100_000, ge=1000)
    variant: Literal["normal", "complex"] = "normal"


PARAMS_BY_COMMAND: dict[str, type[ParamsBase]] = {
    "gridworld": GridworldParams,
    "bicycle-train": BicycleTrainParams,
    "bicycle-eval": BicycleEvalParams,
    "counterexample": CounterexampleParams,
    "bounds": BoundsParams,
    "fidelity": FidelityParams,
}


class _Envelope(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: Command
    seed: int = Field(0, ge=0, le=U64_MAX)
    params: dict[str, Any] = Field(default_factory=dict)
    output_path: str | None = None


class RunConfig(BaseModel):
    """A validated run: command, seed, typed params and output path.

    Build it with :func:`parse_config`; ``params`` is the command's own model.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    seed: int = Field(0, ge=0, le=U64_MAX)
    params: SerializeAsAny[ParamsBase]
    output_path: str | None = None

    def with_overrides(
        self, seed: int | None = None, output_path: str | None = None
    ) -> RunConfig:
        """Return a copy with CLI flag overrides applied."""
        update: dict[str, Any] = {}
        if seed is not None:
            if not 0 <= seed <= U64_MAX:
                raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed}", "seed")
            update["seed"] = seed
        if output_path is not None:
            update["output_path"] = output_path
        return self.model_copy(update=update)


def _raise_from(exc: ValidationError, prefix: str = "") -> ConfigError:
    first = exc.errors()[0]
    key = prefix + ".".join(str(p) for p in first["loc"])
    key = key.rstrip(".")
    where = f" at '{key}'" if key else ""
    return ConfigError(f"invalid config{where}: {first['msg']}", key=key or None)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run config.

    Args:
        text: JSON document, e.g. ``{"command": "bounds", "seed": 1, "params": {}}``.

    Returns:
        RunConfig with defaults applied.

    Raises:
        ConfigError: Bad JSON, unknown key or bad value. ``.key`` names the offender.

    Example:
        >>> cfg = parse_config('{"command": "gridworld", "params": {"trials": 2}}')
        >>> cfg.params.trials
        2
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")

    try:
        envelope = _Envelope.model_validate(raw)
    except ValidationError as e:
        raise _raise_from(e) from e

    try:
        params = PARAMS_BY_COMMAND[envelope.command].model_validate(envelope.params)
    except ValidationError as e:
        raise _raise_from(e, prefix="params.") from e

    return RunConfig(
        command=envelope.command,
        seed=envelope.seed,
        params=params,
        output_path=envelope.output_path,
    )


def dump_config(config: RunConfig) -> str:
    """Serialize the effective config (defaults included) as compact sorted JSON."""
    return json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
