"""Bicycle balancing and riding.

The dynamics are the classic bicycle balancing model: a rider keeps a bicycle
moving at constant speed upright by applying a torque ``tau`` to the
handlebars and shifting their centre of gravity sideways by ``nu``. The only
randomness is a uniform term added to the intended displacement:
``d = nu + noise_halfwidth * (2p - 1)``. The bicycle falls once the tilt
``|omega|`` exceeds pi/15; falling and reaching the goal disc are both absorbing.

Integration is explicit Euler with step ``dt``.

Policies are sigmoid-squashed linear maps of 15 fixed state features
(:func:`features`)::

    tau = expit(w1 . x) * (tau_max - tau_min) + tau_min
    nu  = expit(w2 . x) * (nu_max - nu_min) + nu_min

Tilt, handlebar and their rates enter the features divided by their typical
size over a ride (``*_SCALE``), so a unit weight is a moderate gain. A linear
torque rule on the scaled tilt, tilt rate, handlebar and handlebar rate with
weights of a few units balances the bicycle (:data:`BALANCING_W1`).

Rewards: ``fall_penalty`` on the step the bicycle falls, ``shaping_scale`` per
metre of progress toward the goal on every other step, and 1 on entering the
goal (``gamma**tau`` with continuous-time goal discounting). In training mode
the goal is infinitely far away along +x, so progress is the x displacement
and the goal is never entered.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import expit

from pypegasus._internal._logging import _log_debug
from pypegasus._internal._rng import UniformSource, derive_seed
from pypegasus.config import BicycleConfig, BicycleTrainParams
from pypegasus.exceptions import DimensionMismatchError, DomainError
from pypegasus.model import DiscountMode, SimModel, StateKind
from pypegasus.policies import ParamPolicy
from pypegasus.scenarios import Scenario, check_shape, draw_scenarios
from pypegasus.search import SearchReport, gradient_ascent, hill_climb

# Physical constants
CM_OFFSET = 0.66  # c: horizontal distance front wheel contact to centre of mass (m)
CM_HEIGHT_OFFSET = 0.30  # d_CM: vertical distance centre of mass to cyclist (m)
CM_HEIGHT = 0.94  # h: height of the centre of mass over the ground (m)
WHEELBASE = 1.11  # l: distance between the wheel contacts (m)
MASS_BIKE = 15.0  # M_c
MASS_TYRE = 1.7  # M_d
MASS_RIDER = 60.0  # M_p
TYRE_RADIUS = 0.34  # r
SPEED = 10.0 / 3.6  # v: 10 km/h in m/s
GRAVITY = 9.82
MASS = MASS_BIKE + MASS_RIDER

INERTIA_BIKE = (13.0 / 3.0) * MASS_BIKE * CM_HEIGHT**2 + MASS_RIDER * (
    CM_HEIGHT + CM_HEIGHT_OFFSET
) ** 2
INERTIA_DC = MASS_TYRE * TYRE_RADIUS**2
INERTIA_DV = 1.5 * MASS_TYRE * TYRE_RADIUS**2
INERTIA_DL = 0.5 * MASS_TYRE * TYRE_RADIUS**2
SIGMA_DOT = SPEED / TYRE_RADIUS

FALL_ANGLE = math.pi / 15.0
MAX_HANDLEBAR = 1.3963  # 80 degrees

N_FEATURES = 15
FEATURE_NAMES = (
    "omega",
    "omega_dot",
    "theta",
    "theta_dot",
    "psi",
    "omega*theta",
    "omega*theta_dot",
    "omega_dot*theta",
    "sin(psi)",
    "cos(psi)-1",
    "omega^2",
    "theta^2",
    "omega_dot^2",
    "theta_dot^2",
    "bias",
)

# Divisors applied to omega, omega_dot, theta and theta_dot before features are built.
OMEGA_SCALE = FALL_ANGLE
OMEGA_DOT_SCALE = 0.5
THETA_SCALE = 0.2
THETA_DOT_SCALE = 2.0

# Hand-set torque weights that keep the bicycle up: torque ~ 13.6 omega + 8.0 omega_dot
# - 6.7 theta - 1.1 theta_dot, closed-loop poles near -1.5 +- 1.3j and -4 +- 4.5j.
BALANCING_W1 = (2.855, 4.023, -1.349, -2.162) + (0.0,) * (N_FEATURES - 4)

# Initial-state distribution: half-widths of the uniform draws, in draw order.
INIT_TILT = 0.02
INIT_TILT_RATE = 0.02
INIT_STEER = 0.02
INIT_STEER_RATE = 0.02
INIT_HEADING = math.pi / 6.0


@dataclass(frozen=True)
class BikeState:
    """Bicycle state.

    Attributes:
        omega: Tilt from vertical (rad).
        omega_dot: Tilt rate (rad/s).
        theta: Handlebar angle (rad).
        theta_dot: Handlebar rate (rad/s).
        psi: Heading relative to the bearing of the goal, in (-pi, pi].
        x: Position (m).
        y: Position (m).
        heading: Absolute heading (rad, 0 is +x).
        fallen: Tilt exceeded pi/15 at some point.
        at_goal: Inside the goal disc.
    """

    omega: float = 0.0
    omega_dot: float = 0.0
    theta: float = 0.0
    theta_dot: float = 0.0
    psi: float = 0.0
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0
    fallen: bool = False
    at_goal: bool = False

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)

    def to_fields(self) -> list[float]:
        return [
            self.omega,
            self.omega_dot,
            self.theta,
            self.theta_dot,
            self.psi,
            self.x,
            self.y,
            self.heading,
            float(self.fallen),
            float(self.at_goal),
        ]

    @classmethod
    def from_fields(cls, fields: Sequence[float]) -> BikeState:
        if len(fields) != 10:
            raise DimensionMismatchError("bike state fields", 10, len(fields))
        *reals, fallen, at_goal = fields
        return cls(*(float(v) for v in reals), fallen=bool(fallen), at_goal=bool(at_goal))


@dataclass(frozen=True)
class BikeAction:
    """Handlebar torque (N m) and rider displacement (m)."""

    tau: float
    nu: float


@dataclass(frozen=True)
class BikeWeights:
    """Weights of the two sigmoid units; ``to_vector`` concatenates w1 then w2."""

    w1: NDArray[np.float64]
    w2: NDArray[np.float64]

    def __post_init__(self) -> None:
        for name in ("w1", "w2"):
            w = np.asarray(getattr(self, name), dtype=np.float64).reshape(-1)
            if w.size != N_FEATURES:
                raise DimensionMismatchError(name, N_FEATURES, w.size)
            if not np.all(np.isfinite(w)):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, w)

    @classmethod
    def zeros(cls) -> BikeWeights:
        return cls(np.zeros(N_FEATURES), np.zeros(N_FEATURES))

    @classmethod
    def from_vector(cls, theta: ArrayLike) -> BikeWeights:
        v = np.asarray(theta, dtype=np.float64).reshape(-1)
        if v.size != 2 * N_FEATURES:
            raise DimensionMismatchError("weight vector", 2 * N_FEATURES, v.size)
        return cls(v[:N_FEATURES], v[N_FEATURES:])

    def to_vector(self) -> NDArray[np.float64]:
        return np.concatenate([self.w1, self.w2])


@dataclass(frozen=True)
class ActionBounds:
    tau_min: float = -2.0
    tau_max: float = 2.0
    nu_min: float = -0.02
    nu_max: float = 0.02

    @classmethod
    def of(cls, config: BicycleConfig) -> ActionBounds:
        return cls(config.tau_min, config.tau_max, config.nu_min, config.nu_max)


@dataclass(frozen=True)
class Goal:
    """Goal disc. ``None`` in place of a Goal means "infinitely far along +x"."""

    x: float = 1000.0
    y: float = 0.0
    radius: float = 10.0

    def distance(self, state: BikeState) -> float:
        return math.hypot(self.x - state.x, self.y - state.y)


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def _wrap_many(angle: NDArray[np.float64]) -> NDArray[np.float64]:
    """Wrap to (-pi, pi], like :func:`_wrap`."""
    return np.asarray(np.pi - np.remainder(np.pi - angle, 2.0 * np.pi), dtype=np.float64)


def relative_heading(heading: float, x: float, y: float, goal: Goal | None) -> float:
    if goal is None:
        return _wrap(heading)
    return _wrap(heading - math.atan2(goal.y - y, goal.x - x))


def _inverse_radii(theta: float) -> tuple[float, float, float]:
    """``1/r_front``, ``1/r_back``, ``1/r_CM``; all 0 when the handlebar is straight."""
    if theta == 0.0:
        return 0.0, 0.0, 0.0
    tan_t = abs(math.tan(theta))
    inv_rf = abs(math.sin(theta)) / WHEELBASE
    inv_rb = tan_t / WHEELBASE
    inv_rcm = tan_t / math.sqrt(((WHEELBASE - CM_OFFSET) * tan_t) ** 2 + WHEELBASE**2)
    return inv_rf, inv_rb, inv_rcm


def _sign(v: float) -> float:
    return float((v > 0) - (v < 0))


def bike_step(
    state: BikeState,
    action: BikeAction,
    p: float,
    dt: float,
    noise_halfwidth: float = 0.02,
    goal: Goal | None = None,
) -> BikeState:
    """Advance the bicycle by one Euler step of length ``dt``.

    Args:
        state: Current state. A fallen (or arrived) state is returned unchanged.
        action: Torque and intended displacement.
        p: Uniform number in [0, 1]; the displacement noise is ``halfwidth * (2p - 1)``.
        dt: Step length in seconds.
        noise_halfwidth: Half-width of the displacement noise (m).
        goal: Goal disc, or None for training mode.

    Returns:
        The next state; ``fallen`` is set iff ``|omega| > pi/15``.
    """
    if state.fallen or state.at_goal:
        return state

    d = action.nu + noise_halfwidth * (2.0 * p - 1.0)
    phi = state.omega + math.atan(d / CM_HEIGHT)
    inv_rf, inv_rb, inv_rcm = _inverse_radii(state.theta)

    omega_ddot = (
        MASS * CM_HEIGHT * GRAVITY * math.sin(phi)
        - math.cos(phi)
        * (
            INERTIA_DC * SIGMA_DOT * state.theta_dot
            + _sign(state.theta)
            * SPEED**2
            * (MASS_TYRE * TYRE_RADIUS * (inv_rf + inv_rb) + MASS * CM_HEIGHT * inv_rcm)
        )
    ) / INERTIA_BIKE
    theta_ddot = (action.tau - INERTIA_DV * state.omega_dot * SIGMA_DOT) / INERTIA_DL

    omega = state.omega + state.omega_dot * dt
    omega_dot = state.omega_dot + omega_ddot * dt
    theta = state.theta + state.theta_dot * dt
    theta_dot = state.theta_dot + theta_ddot * dt
    if abs(theta) > MAX_HANDLEBAR:
        theta = math.copysign(MAX_HANDLEBAR, theta)

    heading = state.heading + SPEED * math.tan(state.theta) / WHEELBASE * dt
    x = state.x + SPEED * math.cos(state.heading) * dt
    y = state.y + SPEED * math.sin(state.heading) * dt

    fallen = abs(omega) > FALL_ANGLE
    at_goal = (
        not fallen and goal is not None and math.hypot(goal.x - x, goal.y - y) <= goal.radius
    )
    return BikeState(
        omega=omega,
        omega_dot=omega_dot,
        theta=theta,
        theta_dot=theta_dot,
        psi=relative_heading(heading, x, y, goal),
        x=x,
        y=y,
        heading=heading,
        fallen=fallen,
        at_goal=at_goal,
    )


def features(state: BikeState) -> NDArray[np.float64]:
    """The 15 policy features, in the order of ``FEATURE_NAMES``.

    ``omega``, ``omega_dot``, ``theta`` and ``theta_dot`` are the scaled values;
    the products and squares are taken after scaling.
    """
    w = state.omega / OMEGA_SCALE
    wd = state.omega_dot / OMEGA_DOT_SCALE
    t = state.theta / THETA_SCALE
    td = state.theta_dot / THETA_DOT_SCALE
    psi = state.psi
    return np.array(
        [
            w,
            wd,
            t,
            td,
            psi,
            w * t,
            w * td,
            wd * t,
            math.sin(psi),
            math.cos(psi) - 1.0,
            w * w,
            t * t,
            wd * wd,
            td * td,
            1.0,
        ],
        dtype=np.float64,
    )


def sigmoid_policy(
    weights: BikeWeights, state: BikeState, bounds: ActionBounds | None = None
) -> BikeAction:
    """Squash ``w1 . x`` and ``w2 . x`` into the action bounds.

    Example:
        >>> sigmoid_policy(BikeWeights.zeros(), BikeState())
        BikeAction(tau=0.0, nu=0.0)
    """
    b = bounds or ActionBounds()
    x = features(state)
    s1 = float(expit(float(weights.w1 @ x)))
    s2 = float(expit(float(weights.w2 @ x)))
    return BikeAction(
        tau=s1 * (b.tau_max - b.tau_min) + b.tau_min,
        nu=s2 * (b.nu_max - b.nu_min) + b.nu_min,
    )


def shaping_reward(
    prev: BikeState, next: BikeState, scale: float, goal: Goal | None = None
) -> float:
    """``scale * (distance_to_goal(prev) - distance_to_goal(next))``.

    With no goal (training mode) the progress is ``next.x - prev.x``.
    """
    if goal is None:
        return scale * (next.x - prev.x)
    return scale * (goal.distance(prev) - goal.distance(next))


def goal_entry_fraction(prev: BikeState, next: BikeState, goal: Goal | None = None) -> float:
    """Fraction of the step ``prev -> next`` spent before first touching the goal disc.

    Positions are interpolated linearly; the result is the smallest ``tau`` in
    [0, 1] with ``|prev + tau (next - prev) - centre| = radius``.

    Raises:
        DomainError: ``prev`` is not outside the disc or ``next`` is not inside.
    """
    g = goal or Goal()
    px, py = prev.x - g.x, prev.y - g.y
    dx, dy = next.x - prev.x, next.y - prev.y
    c = px * px + py * py - g.radius**2
    if c <= 0.0 or math.hypot(next.x - g.x, next.y - g.y) > g.radius:
        raise DomainError("goal_entry_fraction needs prev outside the goal and next inside")
    a = dx * dx + dy * dy
    b = 2.0 * (px * dx + py * dy)
    disc = max(b * b - 4.0 * a * c, 0.0)
    tau = (-b - math.sqrt(disc)) / (2.0 * a)
    return min(max(tau, 0.0), 1.0)


def goal_of(config: BicycleConfig) -> Goal | None:
    if config.training_mode:
        return None
    return Goal(x=config.goal_distance, y=0.0, radius=config.goal_radius)


def sample_initial_state(src: UniformSource, goal: Goal | None = None) -> BikeState:
    """Draw tilt, tilt rate, steer, steer rate and heading, in that order."""
    omega = src.uniform_in(-INIT_TILT, INIT_TILT)
    omega_dot = src.uniform_in(-INIT_TILT_RATE, INIT_TILT_RATE)
    theta = src.uniform_in(-INIT_STEER, INIT_STEER)
    theta_dot = src.uniform_in(-INIT_STEER_RATE, INIT_STEER_RATE)
    heading = src.uniform_in(-INIT_HEADING, INIT_HEADING)
    return BikeState(
        omega=omega,
        omega_dot=omega_dot,
        theta=theta,
        theta_dot=theta_dot,
        psi=relative_heading(heading, 0.0, 0.0, goal),
        heading=heading,
    )


def _as_action(action: Any, bounds: ActionBounds) -> BikeAction:
    tau, nu = (action.tau, action.nu) if isinstance(action, BikeAction) else action
    return BikeAction(
        tau=min(max(float(tau), bounds.tau_min), bounds.tau_max),
        nu=min(max(float(nu), bounds.nu_min), bounds.nu_max),
    )


def max_step_reward(config: BicycleConfig) -> float:
    return max(abs(config.fall_penalty), 1.0) + abs(config.shaping_scale) * SPEED * config.dt


def build_bicycle_model(config: BicycleConfig) -> SimModel[BikeState]:
    """The bicycle as a simulative model with ``d_P = 1``.

    Args:
        config: Validated bicycle config.

    Example:
        >>> model = build_bicycle_model(BicycleConfig(training_mode=False))
        >>> model.supports(DiscountMode.CONTINUOUS_GOAL)
        True
    """
    goal = goal_of(config)
    bounds = ActionBounds.of(config)

    def transition(s: BikeState, a: Any, p: NDArray[np.float64]) -> BikeState:
        p0 = float(np.asarray(p, dtype=np.float64).reshape(-1)[0])
        return bike_step(s, _as_action(a, bounds), p0, config.dt, config.noise_halfwidth, goal)

    def reward(s: BikeState) -> float:
        if s.fallen:
            return config.fall_penalty
        return 1.0 if s.at_goal else 0.0

    def step_reward(prev: BikeState, next: BikeState) -> float:
        if next.at_goal:
            return 0.0
        return shaping_reward(prev, next, config.shaping_scale, goal)

    return SimModel(
        transition=transition,
        reward=reward,
        initial=lambda src: sample_initial_state(src, goal),
        gamma=config.gamma,
        r_max=max_step_reward(config),
        d_P=1,
        absorbing=lambda s: s.fallen or s.at_goal,
        state_kind=StateKind.CONTINUOUS,
        d_S=6,
        step_reward=step_reward,
        is_goal=lambda s: s.at_goal,
        goal_fraction=lambda prev, next: goal_entry_fraction(prev, next, goal),
        name="bicycle-train" if goal is None else "bicycle",
        metadata={"config": config},
    )


def bike_action_rule(bounds: ActionBounds) -> Any:
    """``(theta, state) -> BikeAction`` for a 30-vector ``theta``."""

    def rule(theta: NDArray[np.float64], state: BikeState) -> BikeAction:
        return sigmoid_policy(BikeWeights.from_vector(theta), state, bounds)

    return rule


def bike_policy(theta: ArrayLike, config: BicycleConfig) -> ParamPolicy:
    return ParamPolicy(
        theta=np.asarray(theta, dtype=np.float64),
        action_rule=bike_action_rule(ActionBounds.of(config)),
    )


# Vectorized rollouts


@dataclass
class RideSummary:
    """One ride of a batch.

    Attributes:
        value: Discounted return.
        fell_at: Step the bicycle fell on, or None.
        goal_at: Step the goal was entered on, or None.
        path_length: Metres ridden before falling or arriving.
        progress: Distance gained toward the goal (x gained in training mode).
    """

    value: float
    fell_at: int | None
    goal_at: int | None
    path_length: float
    progress: float


@dataclass
class _Batch:
    omega: NDArray[np.float64]
    omega_dot: NDArray[np.float64]
    theta: NDArray[np.float64]
    theta_dot: NDArray[np.float64]
    psi: NDArray[np.float64]
    x: NDArray[np.float64]
    y: NDArray[np.float64]
    heading: NDArray[np.float64]
    fallen: NDArray[np.bool_]
    at_goal: NDArray[np.bool_]

    @classmethod
    def of(cls, states: Sequence[BikeState]) -> _Batch:
        def col(name: str, dtype: Any = np.float64) -> NDArray[Any]:
            return np.array([getattr(s, name) for s in states], dtype=dtype)

        return cls(
            *(col(n) for n in ("omega", "omega_dot", "theta", "theta_dot", "psi", "x", "y")),
            heading=col("heading"),
            fallen=col("fallen", bool),
            at_goal=col("at_goal", bool),
        )

    def features(self) -> NDArray[np.float64]:
        w = self.omega / OMEGA_SCALE
        wd = self.omega_dot / OMEGA_DOT_SCALE
        t = self.theta / THETA_SCALE
        td = self.theta_dot / THETA_DOT_SCALE
        psi = self.psi
        return np.stack(
            [
                w, wd, t, td, psi,
                w * t, w * td, wd * t,
                np.sin(psi), np.cos(psi) - 1.0,
                w * w, t * t, wd * wd, td * td,
                np.ones_like(w),
            ],
            axis=-1,
        )

    def distance(self, goal: Goal) -> NDArray[np.float64]:
        return np.hypot(goal.x - self.x, goal.y - self.y)


def _step_batch(
    b: _Batch,
    tau: NDArray[np.float64],
    nu: NDArray[np.float64],
    p: NDArray[np.float64],
    dt: float,
    halfwidth: float,
    goal: Goal | None,
) -> _Batch:
    """Vectorized :func:`bike_step`; rows that are fallen or arrived stay put."""
    d = nu + halfwidth * (2.0 * p - 1.0)
    phi = b.omega + np.arctan(d / CM_HEIGHT)
    tan_t = np.abs(np.tan(b.theta))
    inv_rf = np.abs(np.sin(b.theta)) / WHEELBASE
    inv_rb = tan_t / WHEELBASE
    inv_rcm = tan_t / np.sqrt(((WHEELBASE - CM_OFFSET) * tan_t) ** 2 + WHEELBASE**2)

    omega_ddot = (
        MASS * CM_HEIGHT * GRAVITY * np.sin(phi)
        - np.cos(phi)
        * (
            INERTIA_DC * SIGMA_DOT * b.theta_dot
            + np.sign(b.theta)
            * SPEED**2
            * (MASS_TYRE * TYRE_RADIUS * (inv_rf + inv_rb) + MASS * CM_HEIGHT * inv_rcm)
        )
    ) / INERTIA_BIKE
    theta_ddot = (tau - INERTIA_DV * b.omega_dot * SIGMA_DOT) / INERTIA_DL

    omega = b.omega + b.omega_dot * dt
    omega_dot = b.omega_dot + omega_ddot * dt
    theta = np.clip(b.theta + b.theta_dot * dt, -MAX_HANDLEBAR, MAX_HANDLEBAR)
    theta_dot = b.theta_dot + theta_ddot * dt
    heading = b.heading + SPEED * np.tan(b.theta) / WHEELBASE * dt
    x = b.x + SPEED * np.cos(b.heading) * dt
    y = b.y + SPEED * np.sin(b.heading) * dt

    bearing = 0.0 if goal is None else np.arctan2(goal.y - y, goal.x - x)
    psi = _wrap_many(heading - bearing)
    fallen = np.abs(omega) > FALL_ANGLE
    at_goal = ~fallen & (
        np.zeros_like(fallen) if goal is None else np.hypot(goal.x - x, goal.y - y) <= goal.radius
    )

    frozen = b.fallen | b.at_goal
    keep = lambda new, old: np.where(frozen, old, new)  # noqa: E731
    return _Batch(
        omega=keep(omega, b.omega),
        omega_dot=keep(omega_dot, b.omega_dot),
        theta=keep(theta, b.theta),
        theta_dot=keep(theta_dot, b.theta_dot),
        psi=keep(psi, b.psi),
        x=keep(x, b.x),
        y=keep(y, b.y),
        heading=keep(heading, b.heading),
        fallen=keep(fallen, b.fallen),
        at_goal=keep(at_goal, b.at_goal),
    )


def _goal_fraction_batch(
    prev: _Batch, nxt: _Batch, goal: Goal, rows: NDArray[np.bool_]
) -> NDArray[np.float64]:
    px, py = prev.x[rows] - goal.x, prev.y[rows] - goal.y
    dx, dy = nxt.x[rows] - prev.x[rows], nxt.y[rows] - prev.y[rows]
    a = dx * dx + dy * dy
    b = 2.0 * (px * dx + py * dy)
    c = px * px + py * py - goal.radius**2
    disc = np.maximum(b * b - 4.0 * a * c, 0.0)
    return np.clip((-b - np.sqrt(disc)) / (2.0 * a), 0.0, 1.0)


def simulate_rides(
    config: BicycleConfig,
    thetas: NDArray[np.float64],
    scenarios: Sequence[Scenario],
    h: int,
    mode: DiscountMode = DiscountMode.DISCRETE,
) -> list[list[RideSummary]]:
    """Ride every weight vector on every scenario at once.

    Args:
        config: Bicycle config.
        thetas: Shape ``(k, 30)``.
        scenarios: Shared scenario set.
        h: Steps.
        mode: Goal discounting mode.

    Returns:
        ``out[j][i]`` is the ride of ``thetas[j]`` on ``scenarios[i]``.
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
    if thetas.shape[1] != 2 * N_FEATURES:
        raise DimensionMismatchError("weight vector", 2 * N_FEATURES, thetas.shape[1])
    k, m = thetas.shape[0], len(scenarios)
    goal = goal_of(config)
    bounds = ActionBounds.of(config)
    gamma = config.gamma

    states = _Batch.of([sc.initial_state for sc in scenarios] * k)
    W = np.repeat(thetas, m, axis=0)
    noise = np.tile(np.stack([sc.noise[:h, 0] for sc in scenarios]), (k, 1))  # (k*m, h)
    n = k * m

    def state_reward(b: _Batch) -> NDArray[np.float64]:
        return np.where(b.fallen, config.fall_penalty, np.where(b.at_goal, 1.0, 0.0))

    total = np.zeros(n)
    discount = 1.0
    r0 = state_reward(states)
    total += discount * r0
    discount *= gamma
    fell_at = np.where(states.fallen, 0, -1)
    goal_at = np.where(states.at_goal, 0, -1)
    path = np.zeros(n)
    start_x = states.x.copy()
    start_dist = None if goal is None else states.distance(goal)

    for t in range(h):
        live = ~(states.fallen | states.at_goal)
        if not live.any():
            break
        x = states.features()
        s1 = expit(np.einsum("ij,ij->i", W[:, :N_FEATURES], x))
        s2 = expit(np.einsum("ij,ij->i", W[:, N_FEATURES:], x))
        tau = s1 * (bounds.tau_max - bounds.tau_min) + bounds.tau_min
        nu = s2 * (bounds.nu_max - bounds.nu_min) + bounds.nu_min
        nxt = _step_batch(states, tau, nu, noise[:, t], config.dt, config.noise_halfwidth, goal)

        if goal is None:
            shaping = config.shaping_scale * (nxt.x - states.x)
        else:
            shaping = config.shaping_scale * (states.distance(goal) - nxt.distance(goal))
        r = state_reward(nxt) + np.where(nxt.at_goal, 0.0, shaping)
        entered = live & nxt.at_goal
        if mode is DiscountMode.CONTINUOUS_GOAL and goal is not None and entered.any():
            r[entered] = gamma ** _goal_fraction_batch(states, nxt, goal, entered)
        r = np.where(live, r, 0.0)
        total += discount * r
        discount *= gamma

        path += np.where(live, SPEED * config.dt, 0.0)
        fell_at = np.where(live & nxt.fallen, t + 1, fell_at)
        goal_at = np.where(entered, t + 1, goal_at)
        states = nxt

    if goal is None:
        progress = states.x - start_x
    else:
        assert start_dist is not None
        progress = start_dist - states.distance(goal)

    out: list[list[RideSummary]] = []
    for j in range(k):
        rides = []
        for i in range(m):
            q = j * m + i
            rides.append(
                RideSummary(
                    value=float(total[q]),
                    fell_at=int(fell_at[q]) if fell_at[q] >= 0 else None,
                    goal_at=int(goal_at[q]) if goal_at[q] >= 0 else None,
                    path_length=float(path[q]),
                    progress=float(progress[q]),
                )
            )
        out.append(rides)
    return out


@dataclass
class BicycleBatchEstimator:
    """``theta -> mean discounted return`` on a pinned scenario set, vectorized over scenarios.

    Agrees with ``estimate_value`` on ``build_bicycle_model(config)`` to about 1e-9;
    numpy and math transcendental functions may differ in the last ulp.
    """

    config: BicycleConfig
    scenarios: Sequence[Scenario]
    h: int
    mode: DiscountMode = DiscountMode.DISCRETE
    calls: int = field(default=0, init=False)

    def __post_init__(self) -> None:
        if not self.scenarios:
            raise DomainError("BicycleBatchEstimator needs at least one scenario")
        check_shape(build_bicycle_model(self.config), self.scenarios, self.h)

    def evaluate_many(self, thetas: NDArray[np.float64]) -> NDArray[np.float64]:
        rides = simulate_rides(self.config, thetas, self.scenarios, self.h, self.mode)
        self.calls += len(rides)
        out = np.empty(len(rides))
        for j, per in enumerate(rides):
            acc = 0.0
            for ride in per:
                acc += ride.value
            out[j] = acc / len(per)
        return out

    def __call__(self, theta: NDArray[np.float64]) -> float:
        value = float(self.evaluate_many(np.asarray(theta, dtype=np.float64)[None, :])[0])
        _log_debug("bicycle_estimate", f"value={value:.6g}", calls=self.calls)
        return value


@dataclass
class RideReport:
    """Fresh rides of one weight vector.

    Attributes:
        rides: One summary per ride.
        horizon: Steps per ride.
    """

    rides: list[RideSummary]
    horizon: int

    @property
    def upright_fraction(self) -> float:
        return sum(r.fell_at is None for r in self.rides) / len(self.rides)

    @property
    def goal_fraction(self) -> float:
        return sum(r.goal_at is not None for r in self.rides) / len(self.rides)

    @property
    def mean_progress(self) -> float:
        return float(np.mean([r.progress for r in self.rides]))

    @property
    def median_path_length(self) -> float:
        return float(np.median([r.path_length for r in self.rides]))


def evaluate_rides(
    config: BicycleConfig,
    theta: ArrayLike,
    rides: int,
    seed: int,
    mode: DiscountMode = DiscountMode.DISCRETE,
) -> RideReport:
    """Ride ``theta`` on ``rides`` scenarios drawn from ``derive_seed(seed, "rides")``."""
    model = build_bicycle_model(config)
    scenarios = draw_scenarios(model, rides, config.horizon, derive_seed(seed, "rides"))
    per = simulate_rides(
        config, np.asarray(theta, dtype=np.float64)[None, :], scenarios, config.horizon, mode
    )[0]
    return RideReport(rides=per, horizon=config.horizon)


@dataclass
class TrainingResult:
    search: SearchReport
    evaluation: RideReport

    @property
    def theta(self) -> NDArray[np.float64]:
        return np.asarray(self.search.best_policy, dtype=np.float64)


def train_bicycle(params: BicycleTrainParams, seed: int) -> TrainingResult:
    """Policy search on one pinned scenario set, then fresh-ride evaluation.

    Scenarios come from ``params.seed`` when set, otherwise ``seed``. The search
    starts from zero weights. Hill climbing scores ``params.population``
    proposals per iteration in one batched call.

    Example:
        >>> result = train_bicycle(BicycleTrainParams(iters=20, horizon=200), seed=1)
        >>> result.evaluation.upright_fraction
    """
    scenario_seed = params.seed if params.seed is not None else seed
    model = build_bicycle_model(params)
    scenarios = draw_scenarios(model, params.m_scenarios, params.horizon, scenario_seed)
    estimator = BicycleBatchEstimator(params, scenarios, params.horizon)
    theta0 = np.zeros(2 * N_FEATURES)

    if params.optimizer == "gradient":
        report = gradient_ascent(
            estimator,
            theta0,
            step_size=params.step_size,
            clamp=params.clamp,
            iters=params.iters,
            grad_step=params.grad_step,
        )
    else:
        report = hill_climb(
            estimator,
            theta0,
            perturb_scale=params.perturb_scale,
            iters=params.iters,
            seed=seed,
            population=params.population,
        )
    evaluation = evaluate_rides(params, report.best_policy, params.eval_rides, seed)
    _log_debug(
        "train_bicycle",
        f"optimizer={params.optimizer} best={report.best_estimate:.6g}",
        upright=evaluation.upright_fraction,
    )
    return TrainingResult(search=report, evaluation=evaluation)


__all__ = [
    "BALANCING_W1",
    "ActionBounds",
    "BicycleBatchEstimator",
    "RideReport",
    "TrainingResult",
    "evaluate_rides",
    "train_bicycle",
    "BikeAction",
    "BikeState",
    "BikeWeights",
    "Goal",
    "RideSummary",
    "bike_policy",
    "bike_step",
    "build_bicycle_model",
    "features",
    "goal_entry_fraction",
    "shaping_reward",
    "sigmoid_policy",
    "simulate_rides",
]
