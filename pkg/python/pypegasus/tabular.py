"""Explicit tabular MDPs and exact policy values.

These are the ground-truth oracles for the scenario estimator. They follow the
same reward accounting as :mod:`pypegasus.rollout`: an absorbing state pays its
reward once, on entry, and nothing afterwards. In matrix form, with ``P_pi``
the policy's transition matrix with absorbing rows zeroed,

    V = R + gamma * P_pi @ V          (infinite horizon)
    V_0 = R, V_k = R + gamma * P_pi @ V_{k-1}   (h transitions)

and the policy value is ``initial @ V``.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import NDArray

from pypegasus.exceptions import (
    DimensionMismatchError,
    DomainError,
    InvalidDistributionError,
)
from pypegasus.model import SimModel, StateKind, inverse_cdf_model

ROW_TOLERANCE = 1e-12
SOLVE_CHUNK = 4096


@dataclass(frozen=True)
class TabularMDP:
    """A finite MDP with explicit transition probabilities.

    Args:
        transitions: Array ``(n_states, n_actions, n_states)``; row ``[s, a]`` is a
            distribution over next states.
        rewards: ``R(s)``, shape ``(n_states,)``.
        initial: Initial distribution, shape ``(n_states,)``.
        absorbing: Boolean mask, shape ``(n_states,)``.
        observations: Observation id of every state. None means the state id.
    """

    transitions: NDArray[np.float64]
    rewards: NDArray[np.float64]
    initial: NDArray[np.float64]
    absorbing: NDArray[np.bool_]
    observations: Sequence[Any] | None = None
    name: str = "tabular"

    def __post_init__(self) -> None:
        P = np.asarray(self.transitions, dtype=np.float64)
        object.__setattr__(self, "transitions", P)
        object.__setattr__(self, "rewards", np.asarray(self.rewards, dtype=np.float64))
        object.__setattr__(self, "initial", np.asarray(self.initial, dtype=np.float64))
        object.__setattr__(self, "absorbing", np.asarray(self.absorbing, dtype=bool))
        if P.ndim != 3 or P.shape[0] != P.shape[2]:
            raise DimensionMismatchError("transition tensor rank", 3, P.ndim)
        n = P.shape[0]
        for name, arr in (("rewards", self.rewards), ("initial", self.initial)):
            if np.asarray(arr).shape != (n,):
                raise DimensionMismatchError(f"{name} length", n, int(np.asarray(arr).size))
        if np.any(P < 0):
            raise InvalidDistributionError("transition probabilities must be >= 0")
        totals = P.sum(axis=2)
        worst = float(np.max(np.abs(totals - 1.0)))
        if worst > ROW_TOLERANCE:
            raise InvalidDistributionError(
                f"transition rows must sum to 1 (worst deviation {worst:.3g})",
                total=float(totals.flat[int(np.argmax(np.abs(totals - 1.0)))]),
            )
        init_total = float(np.sum(self.initial))
        if abs(init_total - 1.0) > ROW_TOLERANCE:
            raise InvalidDistributionError("initial distribution must sum to 1", total=init_total)

    @property
    def n_states(self) -> int:
        return int(self.transitions.shape[0])

    @property
    def n_actions(self) -> int:
        return int(self.transitions.shape[1])

    def observation(self, state: int) -> Any:
        return state if self.observations is None else self.observations[state]

    def state_actions(self, policy: Callable[[Any], Any]) -> NDArray[np.int64]:
        """Action of ``policy`` in every state (0 in absorbing states)."""
        return np.array(
            [
                0 if self.absorbing[s] else int(policy(self.observation(s)))
                for s in range(self.n_states)
            ],
            dtype=np.int64,
        )

    def to_sim_model(self, gamma: float, r_max: float | None = None) -> SimModel[int]:
        """The inverse-CDF simulative model of this MDP (``d_P = 1``)."""
        samplers = {}
        for s in range(self.n_states):
            for a in range(self.n_actions):
                row = self.transitions[s, a]
                support = [(int(t), float(row[t])) for t in np.flatnonzero(row)]
                samplers[s, a] = inverse_cdf_model(_renormalize(support))
        init_sampler = inverse_cdf_model(
            _renormalize([(int(t), float(self.initial[t])) for t in np.flatnonzero(self.initial)])
        )
        rewards = np.asarray(self.rewards, dtype=np.float64)
        absorbing = np.asarray(self.absorbing, dtype=bool)
        return SimModel(
            transition=lambda s, a, p: samplers[s, int(a)](p),
            reward=lambda s: float(rewards[s]),
            initial=lambda src: init_sampler(src.uniform()),
            gamma=gamma,
            r_max=r_max if r_max is not None else max(float(np.max(np.abs(rewards))), 1e-12),
            d_P=1,
            absorbing=lambda s: bool(absorbing[s]),
            state_kind=StateKind.DISCRETE,
            observe=None if self.observations is None else self.observation,
            transition_many=lambda s, a, P: samplers[s, int(a)].many(P[:, 0]),
            name=self.name,
        )


def _renormalize(pairs: list[tuple[int, float]]) -> list[tuple[int, float]]:
    # rows that pass the 1e-12 check may still sum to 1 +- a few ulps
    total = sum(q for _, q in pairs)
    return [(o, q / total) for o, q in pairs]


def _policy_matrices(mdp: TabularMDP, action_tables: NDArray[np.int64]) -> NDArray[np.float64]:
    """``P_pi`` for each row of ``action_tables`` (absorbing rows zeroed)."""
    states = np.arange(mdp.n_states)
    P = mdp.transitions[states[None, :], action_tables, :]
    P[:, np.asarray(mdp.absorbing, dtype=bool), :] = 0.0
    return np.asarray(P, dtype=np.float64)


def exact_values_batch(
    mdp: TabularMDP,
    action_tables: NDArray[np.int64],
    gamma: float,
    h: int | None = None,
) -> NDArray[np.float64]:
    """Exact values of many deterministic policies given as state -> action tables.

    Args:
        mdp: The MDP.
        action_tables: Shape ``(k, n_states)``.
        gamma: Discount in [0, 1).
        h: Truncation (number of transitions). None solves the infinite-horizon system.

    Returns:
        Shape ``(k,)``.
    """
    if not 0.0 <= gamma < 1.0:
        raise DomainError(f"gamma must be in [0, 1), got {gamma}")
    if h is not None and h < 0:
        raise DomainError(f"h must be >= 0, got {h}")
    tables = np.atleast_2d(np.asarray(action_tables, dtype=np.int64))
    if tables.shape[1] != mdp.n_states:
        raise DimensionMismatchError("action table width", mdp.n_states, tables.shape[1])

    R = np.asarray(mdp.rewards, dtype=np.float64)
    init = np.asarray(mdp.initial, dtype=np.float64)
    eye = np.eye(mdp.n_states)
    out = np.empty(tables.shape[0], dtype=np.float64)
    for start in range(0, tables.shape[0], SOLVE_CHUNK):
        chunk = tables[start : start + SOLVE_CHUNK]
        P = _policy_matrices(mdp, chunk)
        if h is None:
            rhs = np.broadcast_to(R, (chunk.shape[0], mdp.n_states))[..., None]
            V = np.linalg.solve(eye[None] - gamma * P, rhs)[..., 0]
        else:
            V = np.broadcast_to(R, (chunk.shape[0], mdp.n_states)).copy()
            for _ in range(h):
                V = R + gamma * np.einsum("kij,kj->ki", P, V)
        out[start : start + chunk.shape[0]] = V @ init
    return out


def exact_value_tabular(
    mdp: TabularMDP,
    policy: Callable[[Any], Any],
    gamma: float,
    h: int | None = None,
) -> float:
    """Exact ``V(pi)`` of a tabular policy.

    Args:
        mdp: Explicit MDP.
        policy: Maps observations (or state ids) to action ids.
        gamma: Discount in [0, 1).
        h: Truncate after ``h`` transitions (``h + 1`` rewards). None solves the
            infinite-horizon linear system; the two agree as ``h`` grows.

    Returns:
        The expected discounted return from the initial distribution.

    Raises:
        InvalidDistributionError: Raised when the MDP is built, for rows that do not
            sum to 1 within 1e-12.

    Example:
        >>> exact_value_tabular(mdp, policy, gamma=0.99)
    """
    return float(exact_values_batch(mdp, mdp.state_actions(policy)[None, :], gamma, h)[0])


def state_distribution(
    mdp: TabularMDP, policy: Callable[[Any], Any], steps: int
) -> NDArray[np.float64]:
    """Distribution of ``s_t`` for ``t = steps`` (absorbing states self-loop)."""
    actions = mdp.state_actions(policy)
    P = mdp.transitions[np.arange(mdp.n_states), actions, :].copy()
    absorbing = np.asarray(mdp.absorbing, dtype=bool)
    P[absorbing, :] = 0.0
    P[absorbing, absorbing] = 1.0
    dist = np.asarray(mdp.initial, dtype=np.float64)
    for _ in range(steps):
        dist = dist @ P
    return dist
