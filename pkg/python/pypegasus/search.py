"""Optimizers over a fixed, deterministic estimate of policy value.

Every optimizer here treats its objective as a plain deterministic function.
Build that function once, on one pinned scenario set, with
:func:`policy_estimator` or :func:`param_objective`, and pass it in; nothing in
this module draws scenarios.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any, Protocol, runtime_checkable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from pypegasus._internal._logging import _log_debug, _log_operation, _log_warning
from pypegasus._internal._metrics import SearchMetrics, Stopwatch
from pypegasus._internal._parallel import ordered_map
from pypegasus._internal._rng import UniformSource, derive_seed
from pypegasus.exceptions import DomainError, EmptyPolicyClassError, NonFiniteValueError
from pypegasus.model import DiscountMode, SimModel
from pypegasus.policies import ParamPolicy, PolicyClass
from pypegasus.rollout import estimate_value
from pypegasus.scenarios import Scenario

Objective = Callable[[NDArray[np.float64]], float]


@dataclass
class SearchReport:
    """Outcome of one search.

    Attributes:
        best_policy: The winner (a policy, or a parameter vector for the
            continuous optimizers).
        best_estimate: Its estimate. Always the maximum of ``trace``.
        evaluations: Objective calls made.
        trace: ``(iteration, estimate)`` for every estimate computed. For
            exhaustive search the iteration is the class index.
        best_index: Class index of the winner (exhaustive search only).
        converged: Stopped early on a zero gradient.
        metrics: Timing and counts.
    """

    best_policy: Any
    best_estimate: float
    evaluations: int
    trace: list[tuple[int, float]] = field(default_factory=list)
    best_index: int | None = None
    converged: bool = False
    metrics: SearchMetrics = field(default_factory=SearchMetrics)


@runtime_checkable
class ClassEstimator(Protocol):
    """Estimator that can score a whole policy class in one vectorized call."""

    def __call__(self, policy: Any) -> float: ...

    def evaluate_all(self, policy_class: PolicyClass) -> NDArray[np.float64] | None: ...


@runtime_checkable
class BatchObjective(Protocol):
    """Objective that can also score the rows of a ``(k, n)`` array in one call."""

    def __call__(self, theta: NDArray[np.float64]) -> float: ...

    def evaluate_many(self, thetas: NDArray[np.float64]) -> NDArray[np.float64]: ...


def policy_estimator(
    model: SimModel[Any],
    scenarios: Sequence[Scenario],
    h: int,
    mode: DiscountMode = DiscountMode.DISCRETE,
) -> Callable[[Any], float]:
    """Closure ``policy -> estimate_value(...).value`` on a pinned scenario set."""
    pinned = tuple(scenarios)

    def estimator(policy: Any) -> float:
        return float(estimate_value(model, policy, pinned, h, mode, workers=1).value)

    return estimator


def param_objective(
    model: SimModel[Any],
    scenarios: Sequence[Scenario],
    h: int,
    action_rule: Callable[[NDArray[np.float64], Any], Any],
    mode: DiscountMode = DiscountMode.DISCRETE,
) -> Objective:
    """Closure ``theta -> estimate`` for the policy ``ParamPolicy(theta, action_rule)``."""
    estimator = policy_estimator(model, scenarios, h, mode)

    def objective(theta: NDArray[np.float64]) -> float:
        return estimator(ParamPolicy(theta=theta, action_rule=action_rule))

    return objective


def exhaustive_search(
    estimator: Callable[[Any], float],
    policy_class: PolicyClass,
    workers: int | None = None,
) -> SearchReport:
    """Score every policy of a finite class and return the best.

    Ties go to the lowest class index. If ``estimator`` implements
    ``evaluate_all`` and returns an array for this class, that vectorized path
    replaces the per-policy calls; the values are the same.

    Args:
        estimator: Deterministic ``policy -> value``.
        policy_class: Finite class, enumerable by index.
        workers: Threads for per-policy calls. Reduction is always in index order.

    Raises:
        EmptyPolicyClassError: The class has no policies.

    Example:
        >>> report = exhaustive_search(estimator, gridworld_policy_class())
        >>> report.best_index, report.best_estimate
    """
    size = len(policy_class)
    if size == 0:
        raise EmptyPolicyClassError()

    with Stopwatch() as sw:
        values: NDArray[np.float64] | None = None
        if isinstance(estimator, ClassEstimator):
            values = estimator.evaluate_all(policy_class)
        if values is None:
            scores = ordered_map(
                lambda i: float(estimator(policy_class.policy(i))), range(size), workers=workers
            )
            values = np.asarray(scores, dtype=np.float64)
        best = int(np.argmax(values))

    report = SearchReport(
        best_policy=policy_class.policy(best),
        best_estimate=float(values[best]),
        evaluations=size,
        trace=list(enumerate(values.tolist())),
        best_index=best,
        metrics=SearchMetrics(duration_ms=sw.elapsed_ms, evaluations=size, iterations=size),
    )
    _log_operation(
        "exhaustive_search",
        getattr(policy_class, "name", type(policy_class).__name__),
        sw.elapsed_ms,
        evaluations=size,
        best=report.best_estimate,
    )
    return report


def _checked(f: Objective, theta: NDArray[np.float64]) -> float:
    value = float(f(theta))
    if not math.isfinite(value):
        raise NonFiniteValueError(theta.copy(), value)
    return value


def _checked_many(f: Objective, thetas: NDArray[np.float64]) -> NDArray[np.float64]:
    """Score every row of ``thetas``; one batched call when ``f`` offers it."""
    if isinstance(f, BatchObjective):
        values = np.asarray(f.evaluate_many(thetas), dtype=np.float64).reshape(-1)
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise NonFiniteValueError(thetas[bad[0]].copy(), float(values[bad[0]]))
        return values
    return np.array([_checked(f, row) for row in thetas], dtype=np.float64)


def numerical_gradient(f: Objective, theta: ArrayLike, step: float) -> NDArray[np.float64]:
    """Central differences ``(f(theta + h e_i) - f(theta - h e_i)) / 2h``.

    All ``2n`` difference points go to ``f.evaluate_many`` in one call when ``f``
    has it.

    Args:
        f: Objective.
        theta: Point.
        step: ``h`` > 0.

    Raises:
        NonFiniteValueError: ``f`` is NaN or infinite at a difference point.

    Example:
        >>> numerical_gradient(lambda t: float(t[0] ** 2), [3.0], 1e-4)
        array([6.])
    """
    if not step > 0:
        raise DomainError(f"step must be > 0, got {step}")
    base = np.array(theta, dtype=np.float64).reshape(-1)
    n = base.size
    points = np.tile(base, (2 * n, 1))
    idx = np.arange(n)
    points[2 * idx, idx] += step
    points[2 * idx + 1, idx] -= step
    values = _checked_many(f, points)
    return (values[0::2] - values[1::2]) / (2.0 * step)


def gradient_ascent(
    estimator: Objective,
    theta0: ArrayLike,
    step_size: float,
    clamp: float,
    iters: int,
    grad_step: float,
) -> SearchReport:
    """Clamped gradient ascent on numerical gradients.

    ``theta_{k+1} = theta_k + min(step_size * |g|, clamp) * g / |g|``. The best
    iterate by objective value is returned, not the last one.

    Args:
        estimator: Objective ``theta -> value``.
        theta0: Start.
        step_size: Multiplier on the gradient.
        clamp: Largest Euclidean length of one update.
        iters: Updates to make, at least 1.
        grad_step: Finite-difference step.

    Returns:
        SearchReport with ``best_policy`` the best parameter vector. ``converged``
        is True when a zero gradient stopped the run.
    """
    if iters < 1:
        raise DomainError(f"iters must be >= 1, got {iters}")
    if not clamp > 0 or not step_size > 0:
        raise DomainError("step_size and clamp must be > 0")

    theta = np.array(theta0, dtype=np.float64).reshape(-1)
    with Stopwatch() as sw:
        value = _checked(estimator, theta)
        evaluations = 1
        trace = [(0, value)]
        best_theta, best_value = theta.copy(), value
        converged = False
        done = 0
        for k in range(1, iters + 1):
            g = numerical_gradient(estimator, theta, grad_step)
            evaluations += 2 * theta.size
            norm = float(np.linalg.norm(g))
            if norm == 0.0:
                converged = True
                _log_warning("gradient_ascent", f"zero gradient at iteration {k}, stopping")
                break
            length = min(step_size * norm, clamp)
            theta = theta + length * (g / norm)
            value = _checked(estimator, theta)
            evaluations += 1
            trace.append((k, value))
            done = k
            if value > best_value:
                best_theta, best_value = theta.copy(), value
            _log_debug("gradient_ascent", f"iteration={k} value={value:.6g} step={length:.3g}")

    report = SearchReport(
        best_policy=best_theta,
        best_estimate=best_value,
        evaluations=evaluations,
        trace=trace,
        converged=converged,
        metrics=SearchMetrics(
            duration_ms=sw.elapsed_ms,
            evaluations=evaluations,
            iterations=done,
            converged=converged,
        ),
    )
    _log_operation("gradient_ascent", "params", sw.elapsed_ms, evaluations, best_value)
    return report


def hill_climb(
    estimator: Objective,
    theta0: ArrayLike,
    perturb_scale: float,
    iters: int,
    seed: int,
    population: int = 1,
) -> SearchReport:
    """Accept-if-better random search with Gaussian proposals.

    Each iteration proposes ``population`` points ``theta + perturb_scale * u``,
    with ``u`` seeded standard normal vectors, and moves to the best of them
    only if it strictly improves the objective. Ties among proposals go to the
    first drawn. Proposals are scored with ``estimator.evaluate_many`` when the
    estimator has it.

    Args:
        estimator: Objective ``theta -> value``.
        theta0: Start.
        perturb_scale: Proposal standard deviation.
        iters: Iterations, at least 1.
        seed: Proposal seed; same seed gives the same report.
        population: Proposals per iteration, at least 1.
    """
    if iters < 1:
        raise DomainError(f"iters must be >= 1, got {iters}")
    if population < 1:
        raise DomainError(f"population must be >= 1, got {population}")
    theta = np.array(theta0, dtype=np.float64).reshape(-1)
    src = UniformSource(derive_seed(seed, "hill_climb"))

    with Stopwatch() as sw:
        value = _checked(estimator, theta)
        trace = [(0, value)]
        accepted = 0
        for k in range(1, iters + 1):
            steps = np.stack([src.normals(theta.size) for _ in range(population)])
            proposals = theta + perturb_scale * steps
            if population == 1:
                candidates = np.array([_checked(estimator, proposals[0])])
            else:
                candidates = _checked_many(estimator, proposals)
            trace.extend((k, float(c)) for c in candidates)
            j = int(np.argmax(candidates))
            if candidates[j] > value:
                theta, value = proposals[j], float(candidates[j])
                accepted += 1
            _log_debug("hill_climb", f"iteration={k} value={value:.6g}")

    evaluations = iters * population + 1
    report = SearchReport(
        best_policy=theta,
        best_estimate=value,
        evaluations=evaluations,
        trace=trace,
        metrics=SearchMetrics(
            duration_ms=sw.elapsed_ms, evaluations=evaluations, iterations=iters
        ),
    )
    _log_operation(
        "hill_climb", "params", sw.elapsed_ms, evaluations, value, extra={"accepted": accepted}
    )
    return report
