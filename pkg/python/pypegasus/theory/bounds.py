"""Sample-complexity calculators for scenario-based policy search.

All three calculators work in log space and only leave it at the end, so
inputs far outside the range where the bounds are useful still give finite
logs (and ``inf`` rather than an OverflowError for the plain values).

Rewards are assumed to lie in ``[-M, M]``. They are shifted to ``[0, 2M]``
before the uniform-convergence step, which puts ``256 * M**2`` in front of
the sample size and evaluates the capacity at accuracy ``eps' / (16 M)``.
With ``M = 1`` this is the textbook ``256 / eps'**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pypegasus.exceptions import DomainError
from pypegasus.rollout import horizon_time


def _exp(log_value: float) -> float:
    try:
        return math.exp(log_value)
    except OverflowError:
        return math.inf


def log_covering_bound(epsilon: float, m_big: float, d: int) -> float:
    """``ln(2 * ((2 e M / eps) * ln(2 e M / eps)) ** d)``."""
    if not 0 < epsilon <= m_big:
        raise DomainError(f"need 0 < epsilon <= m_big, got epsilon={epsilon}, m_big={m_big}")
    if d < 0:
        raise DomainError(f"d must be >= 0, got {d}")
    x = 2.0 * math.e * m_big / epsilon
    return math.log(2.0) + d * (math.log(x) + math.log(math.log(x)))


def covering_bound(epsilon: float, m_big: float, d: int) -> float:
    """Covering number bound ``2 * ((2 e M / eps) * ln(2 e M / eps)) ** d``.

    Args:
        epsilon: Accuracy, ``0 < epsilon <= m_big``.
        m_big: Bound ``M`` on the function values.
        d: Pseudo-dimension.

    Returns:
        The bound, or ``inf`` if it does not fit a float.

    Example:
        >>> covering_bound(1.0, 1.0, 0)
        2.0
    """
    log_value = log_covering_bound(epsilon, m_big, d)
    x = 2.0 * math.e * m_big / epsilon
    try:
        return 2.0 * (x * math.log(x)) ** d
    except OverflowError:
        return _exp(log_value)


@dataclass(frozen=True)
class BoundInputs:
    """Inputs of :func:`capacity_log_bound` and :func:`sample_size_bound`.

    Attributes:
        epsilon: Target accuracy.
        delta: Failure probability, in (0, 1).
        d: Pseudo-dimension bound of each per-step function class.
        d_S: State dimension.
        d_P: Uniform numbers per step.
        B: Lipschitz bound of the transitions, >= 1.
        B_R: Lipschitz bound of the reward, >= 1.
        h_eps: Horizon. None means ``horizon_time(epsilon, gamma, m_big)``.
        m_big: Reward bound ``M``.
        gamma: Discount; only needed when ``h_eps`` is None.
    """

    epsilon: float
    delta: float
    d: int = 1
    d_S: int = 1
    d_P: int = 1
    B: float = 1.0
    B_R: float = 1.0
    h_eps: int | None = None
    m_big: float = 1.0
    gamma: float | None = None

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be > 0, got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise DomainError(f"delta must be in (0, 1), got {self.delta}")
        if self.d < 0 or self.d_S < 1 or self.d_P < 1:
            raise DomainError("need d >= 0, d_S >= 1 and d_P >= 1")
        if self.B < 1 or self.B_R < 1:
            raise DomainError("Lipschitz bounds B and B_R must be >= 1")
        if not self.m_big > 0:
            raise DomainError(f"m_big must be > 0, got {self.m_big}")
        if self.h_eps is None and self.gamma is None:
            raise DomainError("give either h_eps or gamma")
        if self.h_eps is not None and self.h_eps < 0:
            raise DomainError(f"h_eps must be >= 0, got {self.h_eps}")

    @property
    def horizon(self) -> int:
        if self.h_eps is not None:
            return self.h_eps
        assert self.gamma is not None
        return horizon_time(self.epsilon, self.gamma, self.m_big)


def capacity_log_bound(inputs: BoundInputs, epsilon: float | None = None) -> float:
    """Natural log of the capacity bound of the composed ``H``-step function class.

    ``C = 2**(d_S H) * (2 e (d_S + H d_P) (H + 1) B0**H B_R / eps) ** (2 d d_S H)``
    with ``B0 = (d_S + H d_P) B``.

    Args:
        inputs: Bound inputs.
        epsilon: Accuracy to evaluate at. Defaults to ``inputs.epsilon``.

    Example:
        >>> capacity_log_bound(BoundInputs(epsilon=1.0, delta=0.1, h_eps=1))  # ln(2 (16 e)**2)
        8.23823...
    """
    eps = inputs.epsilon if epsilon is None else epsilon
    if not eps > 0:
        raise DomainError(f"epsilon must be > 0, got {eps}")
    H = inputs.horizon
    width = inputs.d_S + H * inputs.d_P
    log_b0 = math.log(width) + math.log(inputs.B)
    inner = (
        math.log(2.0 * math.e)
        + math.log(width)
        + math.log(H + 1)
        + H * log_b0
        + math.log(inputs.B_R)
        - math.log(eps)
    )
    return inputs.d_S * H * math.log(2.0) + 2.0 * inputs.d * inputs.d_S * H * inner


def sample_size_bound(inputs: BoundInputs) -> int:
    """Scenarios sufficient for every policy's estimate to be within ``epsilon`` w.p. ``1 - delta``.

    Splits the accuracy and confidence over the ``H + 1`` reward steps
    (``eps' = eps / 2(H + 1)``, ``delta' = delta / (H + 1)``), then takes
    ``m = 256 M**2 / eps'**2 * (ln(1/delta') + ln 4 + ln C(eps' / 16M))``.

    Raises:
        DomainError: Inputs outside their domain, or a bound beyond float range.
    """
    H = inputs.horizon
    M = inputs.m_big
    eps_step = inputs.epsilon / (2.0 * (H + 1))
    delta_step = inputs.delta / (H + 1)
    log_capacity = capacity_log_bound(inputs, epsilon=eps_step / (16.0 * M))
    bracket = math.log(1.0 / delta_step) + math.log(4.0) + log_capacity
    value = _exp(math.log(256.0 * M * M) - 2.0 * math.log(eps_step) + math.log(bracket))
    if not math.isfinite(value):
        raise DomainError("sample size bound does not fit a float")
    return math.ceil(value)


def bounds_report(inputs: BoundInputs) -> dict[str, float]:
    """Every calculator on one set of inputs, in a fixed key order."""
    return {
        "epsilon": inputs.epsilon,
        "delta": inputs.delta,
        "h_eps": float(inputs.horizon),
        "covering_bound": covering_bound(min(inputs.epsilon, inputs.m_big), inputs.m_big, inputs.d),
        "log_covering_bound": log_covering_bound(
            min(inputs.epsilon, inputs.m_big), inputs.m_big, inputs.d
        ),
        "capacity_log_bound": capacity_log_bound(inputs),
        "sample_size_bound": float(sample_size_bound(inputs)),
    }


__all__ = [
    "BoundInputs",
    "bounds_report",
    "capacity_log_bound",
    "covering_bound",
    "log_covering_bound",
    "sample_size_bound",
]
