"""Deterministic simulative models.

A ``SimModel`` presents a (PO)MDP as a pure transition ``g(s, a, p)`` where
``p`` is a vector of ``d_P`` uniform numbers. Feeding ``g`` uniform ``p`` gives
the intended next-state distribution; feeding it a fixed ``p`` gives one fixed
next state. That second property is what lets a policy value become a
deterministic function once the ``p`` values are drawn up front.

Example:
    >>> from pypegasus import SimModel, inverse_cdf_model
    >>> coin = inverse_cdf_model({"heads": 1 / 3, "tails": 2 / 3})
    >>> coin(0.2), coin(0.5)
    ('heads', 'tails')
"""

from __future__ import annotations

import math
from collections.abc import Callable, Hashable, Iterable, Mapping
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Generic, TypeVar

import numpy as np
from numpy.typing import NDArray

from pypegasus._internal._rng import UniformSource
from pypegasus.exceptions import InvalidDistributionError, InvalidModelError

S = TypeVar("S")
Outcome = TypeVar("Outcome", bound=Hashable)

PVector = NDArray[np.float64]

DISTRIBUTION_TOLERANCE = 1e-12


class StateKind(Enum):
    """Whether states are ids from a finite set or real vectors."""

    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


class DiscountMode(Enum):
    """How the reward of the goal-entry step is discounted.

    DISCRETE: the goal state's reward, discounted by ``gamma**t``.
    CONTINUOUS_GOAL: ``gamma**tau`` instead, where ``tau`` in [0, 1] is the fraction
        of the step spent before crossing into the goal. Still discounted by ``gamma**t``.
    """

    DISCRETE = "discrete"
    CONTINUOUS_GOAL = "continuous_goal"


def _never(_: Any) -> bool:
    return False


@dataclass(frozen=True)
class SimModel(Generic[S]):
    """A (PO)MDP as a deterministic simulative model.

    Args:
        transition: Pure ``g(s, a, p) -> s'``; ``p`` has shape ``(d_P,)``.
        reward: ``R(s)``, bounded by ``r_max`` in magnitude.
        initial: Draws ``s_0`` from a ``UniformSource``.
        gamma: Discount in [0, 1). 1 only with ``episode_length`` set.
        r_max: Reward magnitude bound.
        d_P: Uniform numbers consumed per step.
        absorbing: Predicate; absorbing states self-loop with reward 0 after entry.
        state_kind: Discrete ids or continuous vectors.
        d_S: State dimension (continuous models).
        observe: What the policy sees. None means the state itself.
        step_reward: Extra reward for a transition ``(s, s')``, added to ``R(s')``.
        is_goal: Goal predicate, needed for ContinuousGoal discounting.
        goal_fraction: ``tau`` for a step ``(s, s')`` that enters the goal.
        transition_many: Vectorized ``g(s, a, P)`` over the rows of ``P``.
        episode_length: Fixed episode length; only models with one may use gamma == 1.
        name: Shown in logs.

    Example:
        >>> model = SimModel(
        ...     transition=lambda s, a, p: 1 if p[0] <= 0.5 else 2,
        ...     reward=lambda s: float(s == 1),
        ...     initial=lambda src: 0,
        ...     gamma=0.9,
        ...     r_max=1.0,
        ...     d_P=1,
        ...     absorbing=lambda s: s != 0,
        ... )
    """

    transition: Callable[[S, Any, PVector], S]
    reward: Callable[[S], float]
    initial: Callable[[UniformSource], S]
    gamma: float
    r_max: float
    d_P: int
    absorbing: Callable[[S], bool] = _never
    state_kind: StateKind = StateKind.DISCRETE
    d_S: int = 0
    observe: Callable[[S], Any] | None = None
    step_reward: Callable[[S, S], float] | None = None
    is_goal: Callable[[S], bool] | None = None
    goal_fraction: Callable[[S, S], float] | None = None
    transition_many: Callable[[S, Any, NDArray[np.float64]], NDArray[Any]] | None = None
    episode_length: int | None = None
    name: str = "model"
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.d_P < 1:
            raise InvalidModelError(f"d_P must be >= 1, got {self.d_P}")
        if not self.r_max > 0:
            raise InvalidModelError(f"r_max must be > 0, got {self.r_max}")
        if self.gamma == 1.0:
            if self.episode_length is None:
                raise InvalidModelError("gamma == 1 needs a fixed episode_length")
        elif not 0.0 <= self.gamma < 1.0:
            raise InvalidModelError(f"gamma must be in [0, 1), got {self.gamma}")

    def observation(self, state: S) -> Any:
        """What a policy sees in ``state``."""
        return state if self.observe is None else self.observe(state)

    def supports(self, mode: DiscountMode) -> bool:
        if mode is DiscountMode.CONTINUOUS_GOAL:
            return self.goal_fraction is not None and self.is_goal is not None
        return True

    def check_mode(self, mode: DiscountMode) -> None:
        """Raise InvalidModelError if the model cannot run in ``mode``."""
        if not self.supports(mode):
            raise InvalidModelError(
                f"{self.name}: ContinuousGoal discounting needs goal_fraction and is_goal"
            )

    def with_transition(
        self, transition: Callable[[S, Any, PVector], S], **changes: Any
    ) -> SimModel[S]:
        """Copy of the model with another transition function."""
        return replace(self, transition=transition, **changes)


Table = Mapping[Outcome, float | Fraction] | Iterable[tuple[Outcome, float | Fraction]]


def _normalize_table(distribution: Table[Outcome]) -> tuple[list[Outcome], list[float | Fraction]]:
    if isinstance(distribution, Mapping):
        pairs = list(distribution.items())
    else:
        pairs = list(distribution)
    if not pairs:
        raise InvalidDistributionError("distribution table is empty")
    outcomes = [o for o, _ in pairs]
    probs = [q for _, q in pairs]
    if len(set(outcomes)) != len(outcomes):
        raise InvalidDistributionError("distribution table repeats an outcome")
    for q in probs:
        if not (isinstance(q, Fraction) or math.isfinite(q)) or q <= 0:
            raise InvalidDistributionError(f"probabilities must be positive and finite, got {q}")
    return outcomes, probs


def _check_total(probs: list[float | Fraction]) -> None:
    if all(isinstance(q, Fraction) for q in probs):
        total_exact = sum(probs, Fraction(0))
        if total_exact != 1:
            raise InvalidDistributionError(
                f"probabilities sum to {total_exact}, not 1", total=float(total_exact)
            )
        return
    total = math.fsum(float(q) for q in probs)
    if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
        raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1", total=total)


def cumulative_boundaries(probs: list[float | Fraction]) -> NDArray[np.float64]:
    """Right ends of the inverse-CDF intervals; the last is exactly 1.0."""
    _check_total(probs)
    bounds = np.array([float(c) for c in _prefix_sums(probs)], dtype=np.float64)
    bounds[-1] = 1.0
    return bounds


def _prefix_sums(probs: list[float | Fraction]) -> list[float | Fraction]:
    if all(isinstance(q, Fraction) for q in probs):
        out_exact: list[float | Fraction] = []
        acc = Fraction(0)
        for q in probs:
            acc += q
            out_exact.append(acc)
        return out_exact
    return [math.fsum(float(q) for q in probs[: k + 1]) for k in range(len(probs))]


class InverseCDF(Generic[Outcome]):
    """Piecewise-constant inverse CDF over a finite table.

    Outcome ``k`` is chosen iff ``c[k-1] < p <= c[k]``; ``p = 0`` gives the first
    outcome and ``p = 1`` the last.
    """

    def __init__(self, outcomes: list[Outcome], bounds: NDArray[np.float64]):
        self.outcomes = outcomes
        self.bounds = bounds
        self._outcome_array = np.empty(len(outcomes), dtype=object)
        self._outcome_array[:] = outcomes

    def index(self, p: float | NDArray[np.float64]) -> Any:
        """Branch index (or indices) for ``p``."""
        idx = np.searchsorted(self.bounds, p, side="left")
        return np.minimum(idx, len(self.outcomes) - 1)

    def __call__(self, p: float | NDArray[np.float64]) -> Outcome:
        p_scalar = float(np.asarray(p, dtype=np.float64).reshape(-1)[0])
        return self.outcomes[int(self.index(p_scalar))]

    def many(self, p: NDArray[np.float64]) -> NDArray[Any]:
        """Outcomes for every entry of ``p``."""
        return self._outcome_array[self.index(np.asarray(p, dtype=np.float64))]

    def __repr__(self) -> str:
        return f"InverseCDF(outcomes={self.outcomes!r}, bounds={self.bounds.tolist()!r})"


def inverse_cdf_model(distribution: Table[Outcome]) -> InverseCDF[Outcome]:
    """Build ``p -> outcome`` for one (s, a) from a finite distribution table.

    Intervals are closed on the right: with ``{s1: 1/3, s2: 2/3}``, ``p <= 1/3`` gives
    ``s1`` and anything larger gives ``s2``.

    Args:
        distribution: Mapping or ``(outcome, probability)`` pairs. Probabilities
            must be positive and sum to 1 (exactly for Fractions, else within 1e-12).

    Returns:
        A callable accepting a float or a length-1 p vector.

    Raises:
        InvalidDistributionError: The table is not a distribution.

    Example:
        >>> g = inverse_cdf_model([("left", 0.5), ("right", 0.5)])
        >>> g(0.5)
        'left'
    """
    outcomes, probs = _normalize_table(distribution)
    return InverseCDF(outcomes, cumulative_boundaries(probs))
