"""The 5x5 gridworld POMDP.

Layout: an open 5x5 room, cell ``(x, y)`` has id ``x + 5 * y``. The agent starts
in the lower-left corner ``(0, 0)``; the upper-right corner ``(4, 4)`` is an
absorbing goal. Every non-goal state pays -1, the goal pays 0, so a return is
minus the discounted time to reach the goal.

Actions are compass moves: ``UP = 0``, ``LEFT = 1``, ``DOWN = 2``, ``RIGHT = 3``.
A move into the outer wall leaves the agent where it is.

The simulative model uses one uniform number per step::

    p <= 0.05          -> move up
    0.05 < p <= 0.10   -> move left
    0.10 < p <= 0.15   -> move down
    0.15 < p <= 0.20   -> move right
    otherwise          -> the intended move

The agent only sees which of its eight neighbours are walls, in the bit order
N, NE, E, SE, S, SW, W, NW. The 24 non-goal cells show 8 distinct patterns
(one interior, four edges, three corners), catalogued in order of first
appearance when scanning cell ids upward. A policy maps catalogue index to
action, so the class has ``4**8 = 65536`` members; ``policy_from_index`` reads
the action for observation ``k`` from base-4 digit ``k`` of the index.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, NamedTuple

import numpy as np
from numpy.typing import NDArray

from pypegasus._internal._logging import _log_debug, _log_operation
from pypegasus._internal._metrics import Stopwatch
from pypegasus._internal._parallel import ordered_map
from pypegasus._internal._rng import UniformSource, derive_seed
from pypegasus.exceptions import DimensionMismatchError, DomainError
from pypegasus.model import SimModel, StateKind
from pypegasus.policies import IndexedPolicyClass, TabularPolicy
from pypegasus.scenarios import Scenario, check_shape, draw_scenarios
from pypegasus.search import exhaustive_search
from pypegasus.tabular import TabularMDP, exact_values_batch

SIZE = 5
N_CELLS = SIZE * SIZE
START = 0
GOAL = N_CELLS - 1
GAMMA = 0.99
HORIZON = 100

UP, LEFT, DOWN, RIGHT = 0, 1, 2, 3
N_ACTIONS = 4
ACTION_NAMES = ("up", "left", "down", "right")
_MOVES = {UP: (0, 1), LEFT: (-1, 0), DOWN: (0, -1), RIGHT: (1, 0)}

# Right ends of the four noise branches; branch index 4 means "intended".
BRANCH_BOUNDS = np.array([0.05, 0.10, 0.15, 0.20], dtype=np.float64)
NOISE_MASS = 0.05
INTENDED_MASS = 0.80

# N, NE, E, SE, S, SW, W, NW
NEIGHBOUR_OFFSETS = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
BIT_NAMES = ("N", "NE", "E", "SE", "S", "SW", "W", "NW")

N_OBSERVATIONS = 8
N_POLICIES = N_ACTIONS**N_OBSERVATIONS
# OBS_WEIGHTS[k] = 4**k, the place value of observation k in a class index
OBS_WEIGHTS = N_ACTIONS ** np.arange(N_OBSERVATIONS, dtype=np.int64)

HASH_K_MAX = 1000


class Cell(NamedTuple):
    """A grid cell. ``Cell.of(id)`` and ``cell.id`` convert to and from ids."""

    x: int
    y: int

    @property
    def id(self) -> int:
        return self.x + SIZE * self.y

    @classmethod
    def of(cls, cell_id: int) -> Cell:
        if not 0 <= cell_id < N_CELLS:
            raise DomainError(f"cell id {cell_id} outside 0..{N_CELLS - 1}")
        return cls(cell_id % SIZE, cell_id // SIZE)


def in_grid(x: int, y: int) -> bool:
    return 0 <= x < SIZE and 0 <= y < SIZE


def delta(cell_id: int, action: int) -> int:
    """Cell reached by moving one step; the same cell if that hits a wall."""
    c = Cell.of(cell_id)
    dx, dy = _MOVES[int(action)]
    x, y = c.x + dx, c.y + dy
    return Cell(x, y).id if in_grid(x, y) else cell_id


# NEXT[s, a] = delta(s, a); the goal self-loops whatever the move.
NEXT = np.array(
    [[GOAL if s == GOAL else delta(s, a) for a in range(N_ACTIONS)] for s in range(N_CELLS)],
    dtype=np.int64,
)
REWARDS = np.array([0.0 if s == GOAL else -1.0 for s in range(N_CELLS)], dtype=np.float64)


@dataclass(frozen=True)
class WallObservation:
    """Eight wall bits in the order N, NE, E, SE, S, SW, W, NW."""

    bits: tuple[bool, bool, bool, bool, bool, bool, bool, bool]

    def walls(self) -> list[str]:
        return [name for name, bit in zip(BIT_NAMES, self.bits) if bit]

    def as_int(self) -> int:
        return sum(1 << i for i, bit in enumerate(self.bits) if bit)


def observe(cell: Cell | int) -> WallObservation:
    """Wall bits around ``cell``. The room has no interior walls."""
    c = cell if isinstance(cell, Cell) else Cell.of(cell)
    if not in_grid(c.x, c.y):
        raise DomainError(f"cell {c} outside the grid")
    bits = tuple(not in_grid(c.x + dx, c.y + dy) for dx, dy in NEIGHBOUR_OFFSETS)
    return WallObservation(bits)  # type: ignore[arg-type]


def _build_catalogue() -> tuple[tuple[WallObservation, ...], NDArray[np.int64]]:
    catalogue: list[WallObservation] = []
    cell_obs = np.full(N_CELLS, -1, dtype=np.int64)
    for s in range(N_CELLS):
        if s == GOAL:
            continue
        obs = observe(s)
        if obs not in catalogue:
            catalogue.append(obs)
        cell_obs[s] = catalogue.index(obs)
    return tuple(catalogue), cell_obs


CATALOGUE, CELL_OBS = _build_catalogue()


def observation_index(cell_id: int) -> int:
    """Catalogue index of the observation at ``cell_id`` (-1 at the goal)."""
    return int(CELL_OBS[cell_id])


# POLICY_DIGITS[i, k] = base-4 digit k of i
POLICY_DIGITS = (
    (np.arange(N_POLICIES, dtype=np.int64)[:, None] // (N_ACTIONS ** np.arange(N_OBSERVATIONS)))
    % N_ACTIONS
)


def policy_from_index(idx: int) -> TabularPolicy:
    """Policy number ``idx`` of the 65536; digit ``k`` is the action for observation ``k``."""
    if not 0 <= idx < N_POLICIES:
        raise DomainError(f"policy index {idx} outside 0..{N_POLICIES - 1}")
    return TabularPolicy(table=tuple(int(d) for d in POLICY_DIGITS[idx]), class_index=idx)


def index_of_policy(policy: TabularPolicy) -> int:
    """Inverse of :func:`policy_from_index`."""
    return sum(int(policy(k)) * N_ACTIONS**k for k in range(N_OBSERVATIONS))


def gridworld_policy_class() -> IndexedPolicyClass:
    return IndexedPolicyClass(size=N_POLICIES, factory=policy_from_index, name="gridworld")


def cell_action_tables(digits: NDArray[np.int64]) -> NDArray[np.int64]:
    """Per-cell actions for rows of observation digits; the goal column is 0."""
    digits = np.atleast_2d(digits)
    tables = digits[:, np.where(CELL_OBS >= 0, CELL_OBS, 0)]
    tables[:, GOAL] = 0
    return np.asarray(tables, dtype=np.int64)


def branch_of(p: float | NDArray[np.float64]) -> Any:
    """Noise branch: 0..3 for a forced move in that direction, 4 for the intended one."""
    return np.searchsorted(BRANCH_BOUNDS, p, side="left")


def _transition(s: int, a: int, p: NDArray[np.float64]) -> int:
    if s == GOAL:
        return GOAL
    b = int(branch_of(float(p[0])))
    return int(NEXT[s, b if b < N_ACTIONS else int(a)])


def _transition_many(s: int, a: int, P: NDArray[np.float64]) -> NDArray[np.int64]:
    b = branch_of(np.asarray(P, dtype=np.float64)[:, 0])
    direction = np.where(b < N_ACTIONS, b, int(a))
    return np.asarray(NEXT[s, direction], dtype=np.int64)


def build_gridworld(gamma: float = GAMMA) -> SimModel[int]:
    """The gridworld as a simulative model: ``d_P = 1``, deterministic start at (0, 0).

    Example:
        >>> model = build_gridworld()
        >>> model.transition(0, RIGHT, np.array([0.5]))
        1
    """
    return SimModel(
        transition=_transition,
        reward=lambda s: float(REWARDS[s]),
        initial=lambda src: START,
        gamma=gamma,
        r_max=1.0,
        d_P=1,
        absorbing=lambda s: s == GOAL,
        state_kind=StateKind.DISCRETE,
        observe=observation_index,
        transition_many=_transition_many,
        name="gridworld",
        metadata={"variant": "normal", "hash_k": None},
    )


def draw_hash_table(seed: int) -> NDArray[np.int64]:
    """``k(s, a)`` in 1..1000 for every (cell, action), drawn in that order."""
    src = UniformSource(derive_seed(seed, "complex"))
    return src.integers(1, HASH_K_MAX, N_CELLS * N_ACTIONS).reshape(N_CELLS, N_ACTIONS)


def wrap_complex(
    model: SimModel[int], seed: int, k: NDArray[np.int64] | None = None
) -> SimModel[int]:
    """Obfuscate ``p`` per (s, a): ``g'(s, a, p) = g(s, a, (k(s, a) * p) mod 1)``.

    The pushforward is unchanged, but nearby ``p`` no longer lead to nearby
    outcomes, so scenario noise shared between policies helps less.

    Args:
        model: A gridworld model with ``d_P = 1``.
        seed: Seed of the ``k`` table (ignored when ``k`` is given).
        k: Explicit ``(25, 4)`` integer table.
    """
    if model.d_P != 1:
        raise DimensionMismatchError("noise width", 1, model.d_P)
    table = draw_hash_table(seed) if k is None else np.asarray(k, dtype=np.int64)
    if table.shape != (N_CELLS, N_ACTIONS):
        raise DimensionMismatchError("hash table size", N_CELLS * N_ACTIONS, int(table.size))
    base = model.transition
    base_many = model.transition_many

    def transition(s: int, a: int, p: NDArray[np.float64]) -> int:
        hp = (table[s, int(a)] * np.asarray(p, dtype=np.float64)) % 1.0
        return base(s, a, hp)

    def transition_many(s: int, a: int, P: NDArray[np.float64]) -> NDArray[Any]:
        hp = (table[s, int(a)] * np.asarray(P, dtype=np.float64)) % 1.0
        if base_many is not None:
            return base_many(s, a, hp)
        return np.array([base(s, a, row) for row in hp])

    return model.with_transition(
        transition,
        transition_many=transition_many,
        name=f"{model.name}-complex",
        metadata={**model.metadata, "variant": "complex", "hash_k": table},
    )


def gridworld_mdp() -> TabularMDP:
    """Explicit transition probabilities of the gridworld (wall-blocked mass stays put)."""
    P = np.zeros((N_CELLS, N_ACTIONS, N_CELLS), dtype=np.float64)
    for s in range(N_CELLS):
        for a in range(N_ACTIONS):
            for s_next, q in analytic_distribution(s, a).items():
                P[s, a, s_next] = q
    init = np.zeros(N_CELLS)
    init[START] = 1.0
    absorbing = np.zeros(N_CELLS, dtype=bool)
    absorbing[GOAL] = True
    return TabularMDP(
        transitions=P,
        rewards=REWARDS.copy(),
        initial=init,
        absorbing=absorbing,
        observations=[int(o) for o in CELL_OBS],
        name="gridworld",
    )


def analytic_distribution(s: int, a: int) -> dict[int, float]:
    """Next-cell distribution: 0.05 per compass branch, 0.80 to the intended move."""
    if s == GOAL:
        return {GOAL: 1.0}
    out: dict[int, float] = {}
    for b in range(N_ACTIONS):
        target = int(NEXT[s, b])
        out[target] = out.get(target, 0.0) + NOISE_MASS
    target = int(NEXT[s, a])
    out[target] = out.get(target, 0.0) + INTENDED_MASS
    return out


def _prefix_returns(h: int, gamma: float) -> NDArray[np.float64]:
    """``out[n]`` is the running-discount sum of ``n`` rewards of -1 (``n`` in 0..h+1)."""
    out = np.empty(h + 2, dtype=np.float64)
    total, discount = 0.0, 1.0
    out[0] = total
    for n in range(1, h + 2):
        total += discount * -1.0
        discount *= gamma
        out[n] = total
    return out


@lru_cache(maxsize=1 << N_OBSERVATIONS)
def _free_offsets(mask: int) -> NDArray[np.int64]:
    """Class-index offsets of every action choice on the observations missing from ``mask``."""
    offsets = np.zeros(1, dtype=np.int64)
    for k in range(N_OBSERVATIONS):
        if not (mask >> k) & 1:
            offsets = (offsets[:, None] + np.arange(N_ACTIONS) * OBS_WEIGHTS[k]).reshape(-1)
    offsets.setflags(write=False)
    return offsets


@dataclass
class GridBatchEstimator:
    """Scores many gridworld policies on one pinned scenario set with numpy.

    The result for every policy equals ``estimate_value`` bit for bit: a
    return here is the running-discount sum of ``T`` rewards of -1 followed by
    zeros, where ``T`` is the step the goal is entered (``h + 1`` if never), and
    per-scenario returns are averaged in scenario order.

    Example:
        >>> est = GridBatchEstimator(model, scenarios, h=100)
        >>> report = exhaustive_search(est, gridworld_policy_class())
    """

    model: SimModel[int]
    scenarios: Sequence[Scenario]
    h: int = HORIZON
    max_pairs: int = 1 << 21
    _branches: NDArray[np.int8] = field(init=False, repr=False)
    _prefix: NDArray[np.float64] = field(init=False, repr=False)
    _all: NDArray[np.float64] | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.scenarios:
            raise DomainError("GridBatchEstimator needs at least one scenario")
        if self.model.metadata.get("variant") not in ("normal", "complex"):
            raise DomainError("GridBatchEstimator only handles gridworld models")
        check_shape(self.model, self.scenarios, self.h)
        if any(sc.initial_state != START for sc in self.scenarios):
            raise DomainError("gridworld scenarios must start at the start cell")
        noise = np.stack([sc.noise[: self.h, 0] for sc in self.scenarios])  # (m, h)
        k = self.model.metadata.get("hash_k")
        if k is None:
            p = np.broadcast_to(noise[:, :, None, None], noise.shape + (N_CELLS, N_ACTIONS))
        else:
            p = (np.asarray(k)[None, None, :, :] * noise[:, :, None, None]) % 1.0
        self._branches = np.asarray(branch_of(p), dtype=np.int8)  # (m, h, cells, actions)
        self._prefix = _prefix_returns(self.h, self.model.gamma)

    @property
    def m(self) -> int:
        return len(self.scenarios)

    def hitting_steps(self, tables: NDArray[np.int64]) -> NDArray[np.int64]:
        """Step the goal is entered, shape ``(k, m)``; ``h + 1`` if never within ``h``."""
        k = tables.shape[0]
        m = self.m
        hit = np.full((k, m), self.h + 1, dtype=np.int64)
        pol = np.repeat(np.arange(k, dtype=np.int64), m)
        scn = np.tile(np.arange(m, dtype=np.int64), k)
        state = np.full(k * m, START, dtype=np.int64)
        flat_tables = tables.reshape(-1)
        flat_branches = self._branches.reshape(-1)
        stride_t = N_CELLS * N_ACTIONS
        stride_m = self.h * stride_t
        for t in range(self.h):
            if state.size == 0:
                break
            action = flat_tables[pol * N_CELLS + state]
            b = flat_branches[scn * stride_m + t * stride_t + state * N_ACTIONS + action]
            direction = np.where(b < N_ACTIONS, b, action)
            state = NEXT[state, direction]
            done = state == GOAL
            if done.any():
                hit[pol[done], scn[done]] = t + 1
                keep = ~done
                pol, scn, state = pol[keep], scn[keep], state[keep]
        return hit

    def _leaves(
        self,
    ) -> tuple[NDArray[np.int64], NDArray[np.int64], NDArray[np.int64], NDArray[np.int64]]:
        """Walk every scenario once per group of policies that behave alike on it.

        A group is the set of policies sharing the actions already looked up on
        the walk so far: ``mask`` has bit ``k`` set once observation ``k`` was
        seen, ``partial`` holds those actions as base-4 digits. A group splits
        in four the first time it meets a new observation. On one scenario the
        finished groups partition the class.

        Returns:
            ``(scenario, mask, partial, hitting step)`` per finished group.
        """
        scn = np.arange(self.m, dtype=np.int64)
        state = np.full(self.m, START, dtype=np.int64)
        mask = np.zeros(self.m, dtype=np.int64)
        partial = np.zeros(self.m, dtype=np.int64)
        flat_branches = self._branches.reshape(-1)
        stride_t = N_CELLS * N_ACTIONS
        stride_m = self.h * stride_t
        done_parts: list[tuple[NDArray[np.int64], ...]] = []

        for t in range(self.h):
            if scn.size == 0:
                break
            obs = CELL_OBS[state]
            fresh = ((mask >> obs) & 1) == 0
            if fresh.any():
                old = np.flatnonzero(~fresh)
                split = np.repeat(np.flatnonzero(fresh), N_ACTIONS)
                digit = np.tile(np.arange(N_ACTIONS, dtype=np.int64), split.size // N_ACTIONS)
                sel = np.concatenate([old, split])
                scn, state, obs = scn[sel], state[sel], obs[sel]
                mask = mask[sel]
                partial = partial[sel]
                tail = slice(old.size, None)
                partial[tail] += digit * OBS_WEIGHTS[obs[tail]]
                mask[tail] |= 1 << obs[tail]
            action = (partial // OBS_WEIGHTS[obs]) % N_ACTIONS
            b = flat_branches[scn * stride_m + t * stride_t + state * N_ACTIONS + action]
            state = NEXT[state, np.where(b < N_ACTIONS, b, action)]
            done = state == GOAL
            if done.any():
                steps = np.full(int(done.sum()), t + 1, dtype=np.int64)
                done_parts.append((scn[done], mask[done], partial[done], steps))
                keep = ~done
                scn, state, mask, partial = scn[keep], state[keep], mask[keep], partial[keep]

        done_parts.append((scn, mask, partial, np.full(scn.size, self.h + 1, dtype=np.int64)))
        cols = zip(*done_parts)
        out_scn, out_mask, out_partial, out_step = (np.concatenate(c) for c in cols)
        return out_scn, out_mask, out_partial, out_step

    def class_hitting_steps(self) -> NDArray[np.int64]:
        """``hitting_steps`` for all 65536 policies in class order, shape ``(m, 65536)``."""
        scn, mask, partial, step = self._leaves()
        hits = np.empty((self.m, N_POLICIES), dtype=np.int64)
        for group_mask in np.unique(mask):
            rows = mask == group_mask
            idx = partial[rows, None] + _free_offsets(int(group_mask))[None, :]
            hits[scn[rows, None], idx] = step[rows, None]
        return hits

    def class_values(self, counts: Sequence[int] | None = None) -> dict[int, NDArray[np.float64]]:
        """Estimates of every class policy on the first ``c`` scenarios, per ``c`` in ``counts``.

        Each result equals ``evaluate_indices(np.arange(65536))`` on a
        ``GridBatchEstimator`` built from ``scenarios[:c]``. ``counts`` defaults
        to ``[m]``.
        """
        wanted = sorted(set(counts or [self.m]))
        if wanted[0] < 1 or wanted[-1] > self.m:
            raise DomainError(f"scenario counts must lie in 1..{self.m}, got {wanted}")
        hits = self.class_hitting_steps()
        out: dict[int, NDArray[np.float64]] = {}
        acc = np.zeros(N_POLICIES, dtype=np.float64)
        for i in range(wanted[-1]):
            acc += self._prefix[hits[i]]
            if i + 1 in wanted:
                out[i + 1] = acc / (i + 1)
        return out

    def all_values(self) -> NDArray[np.float64]:
        """Estimates of all 65536 policies, indexed by class index."""
        if self._all is None:
            self._all = self.class_values()[self.m]
        return self._all

    def evaluate_tables(self, tables: NDArray[np.int64]) -> NDArray[np.float64]:
        """Estimates for per-cell action tables, shape ``(k,)``."""
        tables = np.atleast_2d(np.asarray(tables, dtype=np.int64))
        per_chunk = max(1, self.max_pairs // self.m)
        out = np.empty(tables.shape[0], dtype=np.float64)
        for start in range(0, tables.shape[0], per_chunk):
            chunk = tables[start : start + per_chunk]
            returns = self._prefix[self.hitting_steps(chunk)]  # (k, m)
            acc = np.zeros(chunk.shape[0], dtype=np.float64)
            for i in range(self.m):
                acc += returns[:, i]
            out[start : start + chunk.shape[0]] = acc / self.m
        return out

    def evaluate_indices(self, indices: NDArray[np.int64]) -> NDArray[np.float64]:
        return self.evaluate_tables(cell_action_tables(POLICY_DIGITS[np.asarray(indices)]))

    def evaluate_all(self, policy_class: Any) -> NDArray[np.float64] | None:
        if getattr(policy_class, "name", None) != "gridworld" or len(policy_class) != N_POLICIES:
            return None
        with Stopwatch() as sw:
            values = self.all_values()
        _log_debug(
            "grid_batch", f"policies={N_POLICIES} m={self.m} duration_ms={sw.elapsed_ms:.1f}"
        )
        return values

    def __call__(self, policy: Any) -> float:
        digits = np.array([int(policy(k)) for k in range(N_OBSERVATIONS)], dtype=np.int64)
        return float(self.evaluate_tables(cell_action_tables(digits))[0])


def exact_policy_values(
    gamma: float = GAMMA, h: int | None = None, mdp: TabularMDP | None = None
) -> NDArray[np.float64]:
    """Exact value of all 65536 policies, indexed by class index."""
    mdp = mdp or gridworld_mdp()
    return exact_values_batch(mdp, cell_action_tables(POLICY_DIGITS), gamma, h)


def uniform_deviation(
    model: SimModel[int],
    m: int,
    seed: int,
    h: int = HORIZON,
    truncated_values: NDArray[np.float64] | None = None,
) -> float:
    """``max_pi |V_hat(pi) - V_h(pi)|`` over the whole class on one scenario draw."""
    if truncated_values is None:
        truncated_values = exact_policy_values(model.gamma, h)
    scenarios = draw_scenarios(model, m, h, seed)
    estimates = GridBatchEstimator(model, scenarios, h).all_values()
    return float(np.max(np.abs(estimates - truncated_values)))


@dataclass
class ExperimentRow:
    variant: str
    m: int
    mean_value: float
    stderr: float
    trials: int


@dataclass
class ExperimentResult:
    """Output of :func:`gridworld_experiment`.

    Attributes:
        rows: One row per (variant, m), variants outermost.
        opt: ``max_pi V(pi)`` from the exact sweep.
        values: Exact ``V(pi_hat)`` per trial, keyed by ``(variant, m)``.
        chosen: Class index of ``pi_hat`` per trial, keyed like ``values``.
        deviations: ``max_pi |V_hat(pi) - V_h(pi)|`` per trial, keyed like ``values``.
    """

    rows: list[ExperimentRow]
    opt: float
    values: dict[tuple[str, int], NDArray[np.float64]] = field(default_factory=dict)
    chosen: dict[tuple[str, int], NDArray[np.int64]] = field(default_factory=dict)
    deviations: dict[tuple[str, int], NDArray[np.float64]] = field(default_factory=dict)


def trial_seed(seed: int, trial: int) -> int:
    """Scenario seed of one trial; shared by the variants so they can be paired.

    Scenario ``i`` depends only on this seed and ``i``, so the first ``m``
    scenarios of a trial are the same for every ``m``.
    """
    return derive_seed(seed, "trial", trial)


@dataclass(frozen=True)
class ClassValues:
    """Estimator over already computed estimates of the whole class."""

    values: NDArray[np.float64]

    def evaluate_all(self, policy_class: Any) -> NDArray[np.float64] | None:
        if len(policy_class) != self.values.size:
            return None
        return self.values

    def __call__(self, policy: Any) -> float:
        return float(self.values[index_of_policy(policy)])


def gridworld_experiment(
    m_values: Sequence[int],
    trials: int,
    h: int = HORIZON,
    gamma: float = GAMMA,
    seed: int = 0,
    variants: Sequence[str] = ("normal", "complex"),
    workers: int | None = None,
) -> ExperimentResult:
    """Search on ``m`` scenarios, score the winner exactly, repeat.

    For every variant and trial, ``max(m_values)`` scenarios are drawn once;
    for each ``m`` exhaustive search over the 65536 policies runs on the first
    ``m`` of them, and the exact value of the winner is looked up. Rows report
    the mean and standard error of those values.

    Args:
        m_values: Scenario counts.
        trials: Repetitions, at least 2.
        h: Estimator horizon.
        gamma: Discount.
        seed: Experiment seed.
        variants: Any of ``"normal"``, ``"complex"``.
        workers: Threads across trials. Results do not depend on it.

    Returns:
        ExperimentResult with the exact ``opt`` of the class.
    """
    if trials < 2:
        raise DomainError(f"trials must be >= 2, got {trials}")
    if not m_values or min(m_values) < 1:
        raise DomainError(f"m_values must be non-empty and >= 1, got {list(m_values)}")
    unknown = set(variants) - {"normal", "complex"}
    if unknown:
        raise DomainError(f"unknown gridworld variants: {sorted(unknown)}")

    with Stopwatch() as sw:
        exact = exact_policy_values(gamma)
        truncated = exact_policy_values(gamma, h)
        opt = float(np.max(exact))
        base = build_gridworld(gamma)
        models = {"normal": base, "complex": wrap_complex(base, seed)}
        policy_class = gridworld_policy_class()
        counts = sorted({int(m) for m in m_values})

        rows: list[ExperimentRow] = []
        result = ExperimentResult(rows=rows, opt=opt)
        for variant in variants:
            model = models[variant]

            def one_trial(
                t: int, model: SimModel[int] = model
            ) -> dict[int, tuple[int, float]]:
                scenarios = draw_scenarios(model, counts[-1], h, trial_seed(seed, t))
                by_count = GridBatchEstimator(model, scenarios, h).class_values(counts)
                out: dict[int, tuple[int, float]] = {}
                for m, estimates in by_count.items():
                    report = exhaustive_search(ClassValues(estimates), policy_class)
                    assert report.best_index is not None
                    out[m] = (report.best_index, float(np.max(np.abs(estimates - truncated))))
                return out

            per_trial = ordered_map(one_trial, range(trials), workers)
            for m in m_values:
                chosen = np.array([r[int(m)][0] for r in per_trial], dtype=np.int64)
                values = exact[chosen]
                result.values[variant, m] = values
                result.chosen[variant, m] = chosen
                result.deviations[variant, m] = np.array(
                    [r[int(m)][1] for r in per_trial], dtype=np.float64
                )
                rows.append(
                    ExperimentRow(
                        variant=variant,
                        m=int(m),
                        mean_value=float(np.mean(values)),
                        stderr=float(np.std(values, ddof=1) / math.sqrt(trials)),
                        trials=trials,
                    )
                )

    _log_operation(
        "gridworld_experiment",
        "gridworld",
        sw.elapsed_ms,
        evaluations=len(rows) * trials * N_POLICIES,
        best=opt,
    )
    return result
