"""A policy class on which scenario estimates never converge uniformly.

The MDP has states ``s_-1, s_0, s_1`` plus an absorbing end state, with
``R(s_i) = i``. Every episode starts in ``s_0``; action ``a_i`` moves to
``s_-1`` when the step's uniform number lies in the union ``U_i`` (measure
1/2) and to ``s_1`` otherwise, then the episode ends. Every constant policy
has true value 0, yet for any finite scenario set some ``U_i`` avoids all the
sampled numbers, so its policy is estimated at 1.

The simple variant drops the unions: ``s_-1`` iff ``p <= 1/2`` whatever the
action. Estimates then do converge, at the usual ``m**-1/2`` rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Any, Literal

import numpy as np
from numpy.typing import NDArray

from pypegasus._internal._logging import _log_operation
from pypegasus._internal._metrics import Stopwatch
from pypegasus.exceptions import DomainError
from pypegasus.model import SimModel, StateKind
from pypegasus.policies import ConstantPolicy, IndexedPolicyClass
from pypegasus.rollout import estimate_value
from pypegasus.scenarios import draw_scenarios
from pypegasus.theory.intervals import (
    HALF,
    IntervalUnion,
    find_evading_union,
    measure,
    union_contains,
    union_from_index,
)

Variant = Literal["adversarial", "simple"]

EPISODE_LENGTH = 2


class CxState(IntEnum):
    LOW = -1
    START = 0
    HIGH = 1
    END = 2


def _reward(s: CxState) -> float:
    return 0.0 if s is CxState.END else float(s.value)


@dataclass
class CounterexampleMDP:
    """The three-state MDP with a countable action set ``a_1, a_2, ...``.

    Actions are union indices. ``union_for_action`` decodes an index once and
    caches the result; :meth:`register` seeds the cache when the union is
    already known, which skips decoding large indices.
    """

    variant: Variant = "adversarial"
    _unions: dict[int, IntervalUnion] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.variant not in ("adversarial", "simple"):
            raise DomainError(f"unknown counterexample variant: {self.variant!r}")

    def union_for_action(self, action: int) -> IntervalUnion:
        if self.variant == "simple":
            return IntervalUnion(((Fraction(0), HALF),))
        union = self._unions.get(action)
        if union is None:
            union = union_from_index(action)
            self._unions[action] = union
        return union

    def register(self, action: int, union: IntervalUnion) -> None:
        if measure(union) != HALF:
            raise DomainError("registered unions must have measure 1/2")
        self._unions[action] = union

    def transition(self, s: CxState, a: int, p: NDArray[np.float64]) -> CxState:
        if s is not CxState.START:
            return CxState.END
        u = float(p[0])
        return CxState.LOW if union_contains(self.union_for_action(int(a)), u) else CxState.HIGH

    def true_value(self, action: int) -> Fraction:
        """Exact value of the constant policy ``a_action``: ``-mu(U) + (1 - mu(U))``."""
        mu = measure(self.union_for_action(action))
        return (1 - mu) - mu

    def to_sim_model(self) -> SimModel[CxState]:
        return SimModel(
            transition=self.transition,
            reward=_reward,
            initial=lambda src: CxState.START,
            gamma=1.0,
            r_max=1.0,
            d_P=1,
            absorbing=lambda s: s is CxState.END,
            state_kind=StateKind.DISCRETE,
            episode_length=EPISODE_LENGTH,
            name=f"counterexample-{self.variant}",
            metadata={"variant": self.variant},
        )


def simple_counterexample_model() -> CounterexampleMDP:
    return CounterexampleMDP(variant="simple")


def constant_policy_class(size: int) -> IndexedPolicyClass:
    """Constant policies ``a_1 .. a_size`` (class index ``i`` plays action ``i + 1``)."""
    return IndexedPolicyClass(
        size=size, factory=lambda i: ConstantPolicy(i + 1, class_index=i), name="constant"
    )


@dataclass(frozen=True)
class CounterexampleReport:
    m: int
    policy_index: int
    v_hat: float
    v_true: float
    gap: float
    union: IntervalUnion = field(repr=False)


def counterexample_demo(m: int, h: int = EPISODE_LENGTH, seed: int = 0) -> CounterexampleReport:
    """Draw ``m`` scenarios and find a policy whose estimate is off by 1.

    The evading union is built from the first uniform number of every
    scenario; the estimate comes from the generic scenario estimator and the
    true value from the exact measure of the union.

    Example:
        >>> report = counterexample_demo(m=100, seed=7)
        >>> report.v_hat, report.v_true, report.gap
        (1.0, 0.0, 1.0)
    """
    if m < 1 or h < 1:
        raise DomainError(f"need m >= 1 and h >= 1, got m={m}, h={h}")
    mdp = CounterexampleMDP()
    model = mdp.to_sim_model()
    with Stopwatch() as sw:
        scenarios = draw_scenarios(model, m, h, seed)
        union, index = find_evading_union(float(sc.noise[0, 0]) for sc in scenarios)
        mdp.register(index, union)
        v_hat = estimate_value(model, ConstantPolicy(index, class_index=index), scenarios, h).value
        v_true = float(mdp.true_value(index))

    _log_operation("counterexample_demo", model.name, sw.elapsed_ms, evaluations=m, best=v_hat)
    return CounterexampleReport(
        m=m,
        policy_index=index,
        v_hat=float(v_hat),
        v_true=v_true,
        gap=abs(float(v_hat) - v_true),
        union=union,
    )


def max_constant_policy_deviation(
    mdp: CounterexampleMDP, m: int, seed: int, candidates: int = 100, h: int = EPISODE_LENGTH
) -> float:
    """``max_i |V_hat(a_i) - V(a_i)|`` over the first ``candidates`` constant policies."""
    if candidates < 1:
        raise DomainError(f"candidates must be >= 1, got {candidates}")
    model = mdp.to_sim_model()
    scenarios = draw_scenarios(model, m, h, seed)
    policies = constant_policy_class(candidates)
    worst = 0.0
    for i in range(candidates):
        policy: Any = policies.policy(i)
        v_hat = estimate_value(model, policy, scenarios, h).value
        worst = max(worst, abs(v_hat - float(mdp.true_value(policy.action))))
    return worst


__all__ = [
    "CounterexampleMDP",
    "CounterexampleReport",
    "CxState",
    "constant_policy_class",
    "counterexample_demo",
    "max_constant_policy_deviation",
    "simple_counterexample_model",
]
