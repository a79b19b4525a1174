"""Deterministic policies and enumerable policy classes."""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Protocol

import numpy as np
from numpy.typing import NDArray

from pypegasus.exceptions import DimensionMismatchError, DomainError


@dataclass(frozen=True)
class TabularPolicy:
    """Observation -> action table.

    Attributes:
        table: Action per observation id. A sequence is indexed by the id.
        class_index: Position of this policy in its enumerable class.

    Example:
        >>> pi = TabularPolicy(table=(3, 3, 0, 1), class_index=7)
        >>> pi(2)
        0
    """

    table: Sequence[int] | Mapping[Hashable, int]
    class_index: int = 0

    def __call__(self, observation: Any) -> int:
        return int(self.table[observation])

    def check_total(self, observations: Sequence[Hashable]) -> None:
        """Raise DomainError unless every observation has an action."""
        for obs in observations:
            try:
                self.table[obs]  # type: ignore[index]
            except (KeyError, IndexError, TypeError) as e:
                raise DomainError(f"policy has no action for observation {obs!r}") from e


@dataclass(frozen=True)
class ConstantPolicy:
    """Always the same action, whatever it observes."""

    action: Any
    class_index: int = 0

    def __call__(self, observation: Any) -> Any:
        return self.action


@dataclass(frozen=True, eq=False)
class ParamPolicy:
    """``pi_theta(s) = action_rule(theta, s)``.

    Attributes:
        theta: Parameter vector (copied, read-only).
        action_rule: Pure function of ``(theta, observation)``.
    """

    theta: NDArray[np.float64]
    action_rule: Callable[[NDArray[np.float64], Any], Any]

    def __post_init__(self) -> None:
        theta = np.array(self.theta, dtype=np.float64).reshape(-1)
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    def __call__(self, observation: Any) -> Any:
        return self.action_rule(self.theta, observation)

    def with_theta(self, theta: NDArray[np.float64]) -> ParamPolicy:
        if np.size(theta) != self.theta.size:
            raise DimensionMismatchError("theta length", self.theta.size, int(np.size(theta)))
        return ParamPolicy(theta=theta, action_rule=self.action_rule)


class PolicyClass(Protocol):
    """A finite class enumerable by index ``0 .. len - 1``."""

    def __len__(self) -> int: ...

    def policy(self, index: int) -> Any: ...


@dataclass(frozen=True)
class IndexedPolicyClass:
    """Class given by its size and an ``index -> policy`` factory."""

    size: int
    factory: Callable[[int], Any]
    name: str = "indexed"

    def __len__(self) -> int:
        return self.size

    def policy(self, index: int) -> Any:
        if not 0 <= index < self.size:
            raise DomainError(f"index {index} outside 0..{self.size - 1}")
        return self.factory(index)

    def __iter__(self) -> Iterator[Any]:
        return (self.factory(i) for i in range(self.size))


@dataclass(frozen=True)
class FinitePolicyClass:
    """Class given as an explicit list."""

    policies: Sequence[Any] = field(default_factory=tuple)
    name: str = "finite"

    def __len__(self) -> int:
        return len(self.policies)

    def policy(self, index: int) -> Any:
        return self.policies[index]
