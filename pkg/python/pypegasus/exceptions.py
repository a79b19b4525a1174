"""Custom exceptions for pypegasus.

All errors derive from ``PegasusError``. Errors about bad arguments also
derive from ``ValueError`` so plain ``except ValueError`` keeps working.

Example:
    >>> from pypegasus import horizon_time
    >>> from pypegasus.exceptions import DomainError
    >>>
    >>> try:
    ...     horizon_time(0.1, gamma=1.0, r_max=1.0)
    ... except DomainError as e:
    ...     print(f"Bad input: {e}")
"""

from __future__ import annotations

from typing import Any


class PegasusError(Exception):
    """Base class for every pypegasus error."""


class DomainError(PegasusError, ValueError):
    """An argument is outside the domain of the operation.

    Examples: ``gamma >= 1`` for a horizon, ``epsilon <= 0`` for a bound, a
    policy index out of range, or a goal-entry query with no crossing.
    """


class DimensionMismatchError(PegasusError, ValueError):
    """A shape does not match what the model expects.

    Attributes:
        expected: The expected size.
        actual: The size that was given.
        what: What was being checked (e.g. "noise width").
    """

    def __init__(self, what: str, expected: int, actual: int):
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} mismatch: expected {expected}, got {actual}")


class InvalidDistributionError(PegasusError, ValueError):
    """A probability table is not a distribution.

    Attributes:
        total: Sum of the probabilities (None if the table failed for another reason).
    """

    def __init__(self, msg: str, total: float | None = None):
        self.total = total
        super().__init__(msg)


class EmptyScenarioSetError(PegasusError, ValueError):
    """estimate_value was called with no scenarios."""

    def __init__(self) -> None:
        super().__init__("scenario list is empty")


class EmptyPolicyClassError(PegasusError, ValueError):
    """exhaustive_search was given a class with no policies."""

    def __init__(self) -> None:
        super().__init__("policy class is empty")


class NonFiniteValueError(PegasusError, ArithmeticError):
    """The objective returned NaN or infinity at a point it was asked to score.

    Attributes:
        point: The parameter vector being scored.
        value: The value returned.
    """

    def __init__(self, point: Any, value: float):
        self.point = point
        self.value = value
        super().__init__(f"objective is not finite ({value}) at {point}")


class InvalidModelError(PegasusError, ValueError):
    """The model cannot be used the way it was asked to.

    Raised for ContinuousGoal discounting on a model without ``goal_fraction``
    and for ``gamma == 1`` on a model without a fixed episode length.
    """


class ConfigError(PegasusError):
    """A CLI config could not be parsed or validated.

    Attributes:
        key: Dotted path of the offending key, when known.
    """

    def __init__(self, msg: str, key: str | None = None):
        self.key = key
        super().__init__(msg)


__all__ = [
    "PegasusError",
    "DomainError",
    "DimensionMismatchError",
    "InvalidDistributionError",
    "EmptyScenarioSetError",
    "EmptyPolicyClassError",
    "NonFiniteValueError",
    "InvalidModelError",
    "ConfigError",
]
