"""Tests for the bicycle dynamics, policies and batch estimator."""

from __future__ import annotations

import math

import numpy as np
import pytest
from pypegasus import DiscountMode, Scenario, draw_scenarios, estimate_value, rollout
from pypegasus.config import BicycleConfig
from pypegasus.envs.bicycle import (
    BALANCING_W1,
    FALL_ANGLE,
    N_FEATURES,
    ActionBounds,
    BicycleBatchEstimator,
    BikeAction,
    BikeState,
    BikeWeights,
    Goal,
    _wrap,
    _wrap_many,
    bike_policy,
    bike_step,
    build_bicycle_model,
    evaluate_rides,
    features,
    goal_entry_fraction,
    relative_heading,
    shaping_reward,
    sigmoid_policy,
    simulate_rides,
)
from pypegasus.exceptions import DimensionMismatchError, DomainError

GENERIC = BikeState(omega=0.03, omega_dot=-0.1, theta=0.2, theta_dot=0.4, heading=0.3)
DYNAMIC_FIELDS = ("omega", "omega_dot", "theta", "theta_dot", "x", "y", "heading")


def _vector(state):
    return np.array([getattr(state, f) for f in DYNAMIC_FIELDS])


def _calm(h, state=None):
    """Zero-noise scenario: p = 0.5 gives zero displacement noise."""
    return Scenario(initial_state=state or BikeState(), noise=np.full((h, 1), 0.5))


def test_upright_stays_upright():
    """No lean, no torque and no noise keeps the bicycle vertical."""
    s = BikeState()
    for _ in range(100):
        s = bike_step(s, BikeAction(0.0, 0.0), 0.5, 0.01)
    assert s.omega == 0.0
    assert s.y == 0.0
    assert s.x == pytest.approx(100 * 0.01 * 10.0 / 3.6)


@pytest.mark.parametrize(
    "omega,fallen",
    [
        pytest.param(FALL_ANGLE, False, id="exactly_at_threshold"),
        pytest.param(FALL_ANGLE + 0.01, True, id="past_threshold"),
    ],
)
def test_fall_threshold(omega, fallen):
    """Falling needs |omega| strictly above pi/15."""
    s = bike_step(BikeState(omega=omega), BikeAction(0.0, 0.0), 0.5, 0.01)
    assert s.omega == omega
    assert s.fallen is fallen


def test_fallen_state_is_absorbing():
    s = BikeState(omega=0.5, fallen=True)
    assert bike_step(s, BikeAction(2.0, 0.02), 0.9, 0.01) is s


def test_bike_step_is_pure():
    a = bike_step(GENERIC, BikeAction(0.5, -0.01), 0.3, 0.01)
    b = bike_step(GENERIC, BikeAction(0.5, -0.01), 0.3, 0.01)
    assert a == b


def test_mirror_symmetry():
    """Negating tilt, steer, actions and noise mirrors the ride."""
    mirrored = BikeState(
        omega=-GENERIC.omega,
        omega_dot=-GENERIC.omega_dot,
        theta=-GENERIC.theta,
        theta_dot=-GENERIC.theta_dot,
        heading=-GENERIC.heading,
    )
    a, b = GENERIC, mirrored
    for _ in range(20):
        a = bike_step(a, BikeAction(0.5, 0.01), 0.75, 0.01)
        b = bike_step(b, BikeAction(-0.5, -0.01), 0.25, 0.01)

    for name in ("omega", "omega_dot", "theta", "theta_dot", "y", "heading"):
        assert getattr(b, name) == pytest.approx(-getattr(a, name), abs=1e-12)
    assert b.x == pytest.approx(a.x, abs=1e-12)


def test_step_halving_is_second_order():
    """One step of dt against two of dt/2 differs by O(dt^2)."""
    action = BikeAction(0.3, 0.005)

    def gap(dt):
        one = bike_step(GENERIC, action, 0.4, dt)
        two = bike_step(bike_step(GENERIC, action, 0.4, dt / 2), action, 0.4, dt / 2)
        return float(np.linalg.norm(_vector(one) - _vector(two)))

    assert gap(0.02) / gap(0.01) >= 3.5


def test_zero_state_features():
    """Only the bias is non-zero at the zero state."""
    x = features(BikeState())
    assert x.shape == (N_FEATURES,)
    np.testing.assert_array_equal(x[:-1], np.zeros(N_FEATURES - 1))
    assert x[-1] == 1.0


def test_features_shape_and_determinism():
    rng = np.random.default_rng(1)
    for _ in range(100):
        s = BikeState(*rng.uniform(-0.2, 0.2, 5))
        x = features(s)
        assert x.shape == (15,)
        np.testing.assert_array_equal(x, features(s))


def test_sigmoid_policy_midpoint():
    """Zero weights give the middle of both bounds."""
    bounds = ActionBounds(tau_min=-1.0, tau_max=3.0, nu_min=-0.02, nu_max=0.04)
    action = sigmoid_policy(BikeWeights.zeros(), GENERIC, bounds)
    assert action.tau == pytest.approx(1.0)
    assert action.nu == pytest.approx(0.01)


def test_sigmoid_policy_saturates():
    """w1 . x = 50 puts tau within 1e-9 of its upper bound."""
    w1 = np.zeros(N_FEATURES)
    w1[-1] = 50.0
    action = sigmoid_policy(BikeWeights(w1, np.zeros(N_FEATURES)), BikeState())
    assert action.tau == pytest.approx(2.0, abs=1e-9)


def test_sigmoid_policy_monotone_and_bounded():
    taus = []
    for z in np.linspace(-60.0, 60.0, 41):
        w1 = np.zeros(N_FEATURES)
        w1[-1] = z
        action = sigmoid_policy(BikeWeights(w1, -w1), BikeState())
        assert -2.0 <= action.tau <= 2.0
        assert -0.02 <= action.nu <= 0.02
        taus.append(action.tau)
    assert taus == sorted(taus)


def test_weights_validation():
    with pytest.raises(DimensionMismatchError):
        BikeWeights(np.zeros(14), np.zeros(15))
    with pytest.raises(DomainError):
        BikeWeights(np.full(15, np.nan), np.zeros(15))
    theta = np.arange(30.0)
    np.testing.assert_array_equal(BikeWeights.from_vector(theta).to_vector(), theta)


@pytest.mark.parametrize(
    "prev_x,next_x,expected",
    [
        pytest.param(0.0, 0.0, 0.0, id="no_movement"),
        pytest.param(0.0, 1.0, 1.0, id="progress"),
        pytest.param(1.0, 0.0, -1.0, id="regress"),
    ],
)
def test_shaping_reward(prev_x, next_x, expected):
    """Progress toward the goal, signed."""
    goal = Goal(x=100.0)
    assert shaping_reward(BikeState(x=prev_x), BikeState(x=next_x), 1.0, goal) == expected
    assert shaping_reward(BikeState(x=prev_x), BikeState(x=next_x), 1.0) == expected


@pytest.mark.parametrize(
    "prev_x,next_x,expected",
    [
        pytest.param(980.0, 1000.0, 0.5, id="radial_half"),
        pytest.param(980.0, 990.0, 1.0, id="boundary"),
    ],
)
def test_goal_entry_fraction(prev_x, next_x, expected):
    """Linear interpolation to the first crossing of the goal circle."""
    goal = Goal()
    tau = goal_entry_fraction(BikeState(x=prev_x), BikeState(x=next_x), goal)
    assert tau == pytest.approx(expected)


def test_goal_entry_fraction_root():
    """The interpolated point sits on the circle."""
    goal = Goal()
    prev, nxt = BikeState(x=985.0, y=8.0), BikeState(x=995.0, y=1.0)
    tau = goal_entry_fraction(prev, nxt, goal)
    x = prev.x + tau * (nxt.x - prev.x)
    y = prev.y + tau * (nxt.y - prev.y)
    assert math.hypot(x - goal.x, y - goal.y) == pytest.approx(10.0, abs=1e-9)


def test_goal_entry_fraction_needs_crossing():
    with pytest.raises(DomainError):
        goal_entry_fraction(BikeState(x=0.0), BikeState(x=1.0), Goal())


def test_fall_is_absorbing():
    """After the fall step every reward is 0."""
    config = BicycleConfig(horizon=10)
    model = build_bicycle_model(config)
    policy = bike_policy(np.zeros(30), config)
    tr = rollout(model, policy, _calm(10, BikeState(omega=0.2, omega_dot=1.0)), 10)

    assert tr.absorbed_at == 1
    expected = config.fall_penalty + config.shaping_scale * tr.states[1].x
    assert tr.rewards[1] == pytest.approx(expected)
    assert tr.rewards[2:] == [0.0] * 9
    assert all(s.fallen for s in tr.states[1:])


def test_shaping_telescopes():
    """Shaping rewards sum to scale times the progress."""
    config = BicycleConfig(horizon=200)
    model = build_bicycle_model(config)
    tr = rollout(model, bike_policy(np.zeros(30), config), _calm(200), 200)

    assert tr.absorbed_at is None
    assert sum(tr.rewards[1:]) == pytest.approx(config.shaping_scale * tr.states[-1].x)


def test_goal_reward_with_continuous_discounting():
    """Riding straight into the goal pays gamma**tau on entry."""
    config = BicycleConfig(training_mode=False, goal_distance=15.0, horizon=300)
    model = build_bicycle_model(config)
    policy = bike_policy(np.zeros(30), config)
    scenario = _calm(300)

    tr = rollout(model, policy, scenario, 300, DiscountMode.CONTINUOUS_GOAL)
    assert tr.goal_step is not None
    t, tau = tr.goal_step
    goal = Goal(x=15.0)
    assert tau == goal_entry_fraction(tr.states[t - 1], tr.states[t], goal)
    assert tr.rewards[t] == config.gamma**tau
    assert tr.rewards[t + 1 :] == [0.0] * (300 - t)

    discrete = rollout(model, policy, scenario, 300)
    assert discrete.rewards[t] == 1.0


def test_config_round_trip_gives_same_rollout():
    config = BicycleConfig(horizon=50, noise_halfwidth=0.03)
    again = BicycleConfig.model_validate(config.model_dump())
    scenarios = draw_scenarios(build_bicycle_model(config), m=1, h=50, seed=4)
    theta = np.linspace(-0.1, 0.1, 30)

    a = rollout(build_bicycle_model(config), bike_policy(theta, config), scenarios[0], 50)
    b = rollout(build_bicycle_model(again), bike_policy(theta, again), scenarios[0], 50)
    assert a.rewards == b.rewards


@pytest.mark.parametrize(
    "config",
    [
        pytest.param(BicycleConfig(horizon=120), id="training"),
        pytest.param(BicycleConfig(horizon=120, training_mode=False), id="goal"),
    ],
)
def test_batch_estimator_matches_rollouts(config):
    """The vectorized estimator agrees with estimate_value to 1e-9."""
    model = build_bicycle_model(config)
    scenarios = draw_scenarios(model, m=6, h=120, seed=3)
    theta = np.random.default_rng(5).normal(scale=0.5, size=30)

    batch = BicycleBatchEstimator(config, scenarios, 120)(theta)
    scalar = estimate_value(model, bike_policy(theta, config), scenarios, 120).value
    assert batch == pytest.approx(scalar, abs=1e-9)


def test_simulate_rides_records_falls():
    """A ride that falls reports the step and stops accumulating path."""
    config = BicycleConfig(horizon=20)
    scenarios = [_calm(20, BikeState(omega=0.2, omega_dot=1.0)), _calm(20)]
    [rides] = simulate_rides(config, np.zeros((1, 30)), scenarios, 20)

    assert rides[0].fell_at == 1
    assert rides[0].path_length == pytest.approx(10.0 / 3.6 * 0.01)
    assert rides[1].fell_at is None
    assert rides[1].progress == pytest.approx(20 * 0.01 * 10.0 / 3.6)


def test_simulate_rides_rejects_bad_width():
    with pytest.raises(DimensionMismatchError):
        simulate_rides(BicycleConfig(), np.zeros((1, 29)), [_calm(5)], 5)


@pytest.mark.parametrize("angle", [math.pi, -math.pi, 0.25, -2.0, 4.0, -4.0])
def test_batch_heading_wrap_matches_scalar(angle):
    """Both wraps land in (-pi, pi], so a heading of -pi reads as pi."""
    assert _wrap_many(np.array([angle]))[0] == pytest.approx(_wrap(angle), abs=1e-12)


def test_heading_of_pi_has_one_representation():
    assert relative_heading(-math.pi, 0.0, 0.0, None) == math.pi
    np.testing.assert_array_equal(_wrap_many(np.array([math.pi, -math.pi])), [math.pi, math.pi])


def test_balancing_weights_keep_bicycle_up():
    """The hand-set torque weights ride a full horizon on fresh scenarios."""
    theta = np.concatenate([BALANCING_W1, np.zeros(N_FEATURES)])
    report = evaluate_rides(BicycleConfig(horizon=500), theta, rides=20, seed=4)

    assert report.upright_fraction >= 0.95
    assert report.mean_progress > 0.0


def test_zero_weights_fall_early():
    """Without torque the bicycle is down well inside the horizon."""
    report = evaluate_rides(BicycleConfig(horizon=300), np.zeros(30), rides=20, seed=4)
    early = [r.fell_at is not None and r.fell_at <= 200 for r in report.rides]
    assert np.mean(early) >= 0.9
