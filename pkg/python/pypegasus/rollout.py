"""Deterministic rollouts and the scenario value estimator.

Reward accounting, shared by every evaluator in the package:

- ``rewards[0] = R(s_0)``; ``rewards[t] = R(s_t) + step_reward(s_{t-1}, s_t)``.
- The reward of an absorbing state is collected on the step it is entered.
  After that the state self-loops, rewards are 0 and the policy is not asked.
- The return is accumulated as ``total += discount * r; discount *= gamma``
  starting from ``discount = 1.0``. Batch evaluators repeat exactly these
  float operations so their results match bit for bit.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from pypegasus._internal._logging import _log_debug
from pypegasus._internal._metrics import EvaluationMetrics, Stopwatch, ValueEstimate
from pypegasus._internal._parallel import ordered_map
from pypegasus.exceptions import DomainError, EmptyScenarioSetError
from pypegasus.model import DiscountMode, SimModel
from pypegasus.scenarios import Scenario, check_shape

Policy = Callable[[Any], Any]


def horizon_time(epsilon: float, gamma: float, r_max: float) -> int:
    """Smallest ``H`` with ``gamma**H * r_max / (1 - gamma) <= epsilon / 2``.

    Rewards after step ``H`` can change a discounted return by at most
    ``epsilon / 2``.

    Args:
        epsilon: Accuracy, > 0.
        gamma: Discount in [0, 1).
        r_max: Reward magnitude bound, > 0.

    Returns:
        ``H >= 0``.

    Raises:
        DomainError: Arguments outside their domain.

    Example:
        >>> horizon_time(0.2, 0.9, 1.0)
        44
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    if not 0.0 <= gamma < 1.0:
        raise DomainError(f"gamma must be in [0, 1), got {gamma}")
    if not r_max > 0:
        raise DomainError(f"r_max must be > 0, got {r_max}")

    def tail(h: int) -> float:
        return float(gamma**h * r_max / (1 - gamma))

    if tail(0) <= epsilon / 2:
        return 0
    if gamma == 0.0:
        return 1
    guess = max(0, math.ceil(math.log(epsilon * (1 - gamma) / (2 * r_max)) / math.log(gamma)))
    # the float formula can be off by one either way
    while tail(guess) > epsilon / 2:
        guess += 1
    while guess > 0 and tail(guess - 1) <= epsilon / 2:
        guess -= 1
    return guess


def hoeffding_halfwidth(r_range: float, m: int, delta: float) -> float:
    """Half-width ``r_range * sqrt(ln(2/delta) / 2m)`` of a Hoeffding interval.

    With probability at least ``1 - delta``, the mean of ``m`` i.i.d. values in an
    interval of length ``r_range`` is within this distance of its expectation.
    """
    if m < 1 or not 0 < delta < 1:
        raise DomainError("need m >= 1 and 0 < delta < 1")
    return r_range * math.sqrt(math.log(2.0 / delta) / (2.0 * m))


@dataclass
class Trajectory:
    """States and rewards produced by one (policy, scenario) rollout.

    Attributes:
        states: ``h + 1`` states, ``states[0]`` is the scenario's initial state.
        rewards: ``h + 1`` undiscounted rewards.
        goal_step: ``(t, tau)`` when the goal was entered on step ``t``.
        absorbed_at: First index whose state is absorbing, if any.
        actions: Actions taken (``h`` entries; None on absorbed steps).
    """

    states: list[Any]
    rewards: list[float]
    goal_step: tuple[int, float] | None = None
    absorbed_at: int | None = None
    actions: list[Any] = field(default_factory=list)

    def discounted_return(self, gamma: float) -> float:
        """``sum_t gamma**t * rewards[t]`` with the running-discount order."""
        total = 0.0
        discount = 1.0
        for r in self.rewards:
            total += discount * r
            discount *= gamma
        return total

    @property
    def live_steps(self) -> int:
        """Steps on which the simulator was actually called."""
        if self.absorbed_at is None:
            return len(self.rewards) - 1
        return self.absorbed_at


def rollout(
    model: SimModel[Any],
    policy: Policy,
    scenario: Scenario,
    h: int,
    mode: DiscountMode = DiscountMode.DISCRETE,
) -> Trajectory:
    """Roll ``policy`` out on ``scenario`` for ``h`` steps.

    ``states[t + 1] = g(states[t], policy(observe(states[t])), noise[t])`` until an
    absorbing state is entered.

    Args:
        model: Simulative model.
        policy: Maps what the model's ``observe`` returns to an action.
        scenario: Needs at least ``h`` noise rows of width ``d_P``.
        h: Number of steps, at least 0.
        mode: ContinuousGoal replaces the goal-entry reward with ``gamma**tau``.

    Raises:
        DimensionMismatchError: Scenario noise too short or of the wrong width.
        InvalidModelError: ContinuousGoal on a model without goal information.
    """
    if h < 0:
        raise DomainError(f"h must be >= 0, got {h}")
    model.check_mode(mode)
    check_shape(model, [scenario], h)

    s = scenario.initial_state
    states = [s]
    rewards = [float(model.reward(s))]
    actions: list[Any] = []
    absorbed_at = 0 if model.absorbing(s) else None
    goal_step: tuple[int, float] | None = None
    continuous = mode is DiscountMode.CONTINUOUS_GOAL

    for t in range(h):
        if absorbed_at is not None:
            states.append(s)
            rewards.append(0.0)
            actions.append(None)
            continue
        a = policy(model.observation(s))
        s_next = model.transition(s, a, scenario.noise[t])
        r = float(model.reward(s_next))
        if model.step_reward is not None:
            r += float(model.step_reward(s, s_next))
        if model.is_goal is not None and model.is_goal(s_next):
            tau = model.goal_fraction(s, s_next) if model.goal_fraction is not None else 1.0
            goal_step = (t + 1, float(tau))
            if continuous:
                r = float(model.gamma**tau)
        if model.absorbing(s_next):
            absorbed_at = t + 1
        actions.append(a)
        states.append(s_next)
        rewards.append(r)
        s = s_next

    return Trajectory(
        states=states,
        rewards=rewards,
        goal_step=goal_step,
        absorbed_at=absorbed_at,
        actions=actions,
    )


def _mean_in_order(values: Sequence[float]) -> float:
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def estimate_value(
    model: SimModel[Any],
    policy: Policy,
    scenarios: Sequence[Scenario],
    h: int,
    mode: DiscountMode = DiscountMode.DISCRETE,
    workers: int | None = None,
) -> ValueEstimate:
    """Average discounted return of ``policy`` over pinned scenarios.

    ``per_scenario[i] = sum_{t=0..h} gamma**t * r_t`` along the rollout of
    scenario ``i``; ``value`` is their mean, summed in scenario-index order.
    The result is bit-identical for any worker count.

    Args:
        model: Simulative model.
        policy: Policy to evaluate.
        scenarios: Non-empty; each with at least ``h`` noise rows.
        h: Truncation horizon.
        mode: Goal discounting mode.
        workers: Threads for the rollouts. None uses the default worker count.

    Returns:
        ValueEstimate: unpacks as ``(value, per_scenario)`` and has ``.metrics``.

    Raises:
        EmptyScenarioSetError: No scenarios.

    Example:
        >>> value, per_scenario = estimate_value(model, policy, scenarios, h=100)
        >>> estimate = estimate_value(model, policy, scenarios, h=100)
        >>> estimate.metrics.duration_ms
    """
    if not scenarios:
        raise EmptyScenarioSetError()
    model.check_mode(mode)
    check_shape(model, scenarios, h)

    with Stopwatch() as sw:
        trajectories = ordered_map(
            lambda sc: rollout(model, policy, sc, h, mode), scenarios, workers=workers
        )
        per_scenario = [tr.discounted_return(model.gamma) for tr in trajectories]
        value = _mean_in_order(per_scenario)

    metrics = EvaluationMetrics(
        duration_ms=sw.elapsed_ms,
        scenarios=len(scenarios),
        steps=sum(tr.live_steps for tr in trajectories),
    )
    _log_debug("estimate_value", f"model={model.name} value={value:.6g}", scenarios=len(scenarios))
    return ValueEstimate(value, per_scenario, metrics)


def step_reward_means(
    model: SimModel[Any],
    policy: Policy,
    scenarios: Sequence[Scenario],
    h: int,
    mode: DiscountMode = DiscountMode.DISCRETE,
) -> NDArray[np.float64]:
    """Mean reward at each step over the scenarios, shape ``(h + 1,)``.

    ``sum_t gamma**t * step_reward_means(...)[t]`` equals ``estimate_value`` up to
    float reordering.
    """
    if not scenarios:
        raise EmptyScenarioSetError()
    rewards = np.array(
        [rollout(model, policy, sc, h, mode).rewards for sc in scenarios], dtype=np.float64
    )
    return np.asarray(rewards.mean(axis=0), dtype=np.float64)
