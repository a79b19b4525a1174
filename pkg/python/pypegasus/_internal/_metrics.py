"""Internal metrics helpers."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class EvaluationMetrics:
    """Cost of one estimate_value call.

    Attributes:
        duration_ms: Wall time in milliseconds.
        scenarios: Number of scenarios rolled out.
        steps: Total simulator steps taken (absorbed steps excluded).
    """

    duration_ms: float = 0.0
    scenarios: int = 0
    steps: int = 0

    def __repr__(self) -> str:
        return (
            f"EvaluationMetrics(duration_ms={self.duration_ms:.2f}, "
            f"scenarios={self.scenarios}, steps={self.steps})"
        )


@dataclass(frozen=True)
class SearchMetrics:
    """Cost of one search run."""

    duration_ms: float = 0.0
    evaluations: int = 0
    iterations: int = 0
    converged: bool = field(default=False)

    def __repr__(self) -> str:
        return (
            f"SearchMetrics(duration_ms={self.duration_ms:.2f}, "
            f"evaluations={self.evaluations}, iterations={self.iterations}, "
            f"converged={self.converged})"
        )


class ValueEstimate(tuple[float, list[float]]):
    """The ``(value, per_scenario)`` pair that also carries metrics.

    Internal class - users unpack a plain pair or read .value/.per_scenario/.metrics.
    """

    metrics: EvaluationMetrics

    def __new__(
        cls, value: float, per_scenario: list[float], metrics: EvaluationMetrics
    ) -> ValueEstimate:
        obj = super().__new__(cls, (value, per_scenario))
        obj.metrics = metrics
        return obj

    @property
    def value(self) -> float:
        return self[0]

    @property
    def per_scenario(self) -> list[float]:
        return self[1]

    def __getnewargs__(self) -> tuple[Any, ...]:
        return (self[0], self[1], self.metrics)


class Stopwatch:
    """Tiny timer used as ``with Stopwatch() as sw: ...; sw.elapsed_ms``."""

    def __init__(self) -> None:
        self._start = 0.0
        self.elapsed_ms = 0.0

    def __enter__(self) -> Stopwatch:
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc: object) -> None:
        self.elapsed_ms = (time.perf_counter() - self._start) * 1000.0
