"""Monte Carlo check that ``g(s, a, p)`` has the intended pushforward."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Hashable, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from pypegasus._internal._logging import _log_warning
from pypegasus._internal._rng import UniformSource, derive_seed
from pypegasus.exceptions import DomainError
from pypegasus.model import SimModel

Z_LIMIT = 3.0
MIN_DRAWS = 1000


@dataclass
class FidelityReport:
    """Result of a fidelity check.

    Attributes:
        passed: Every outcome within ``Z_LIMIT`` binomial standard deviations, and
            nothing observed outside the reference support.
        n: Number of draws.
        counts: Observed count per reference outcome.
        z_scores: ``(count - n q) / sqrt(n q (1 - q))`` per reference outcome.
        unexpected: Outcomes seen that the reference does not list, with counts.
    """

    passed: bool
    n: int
    counts: dict[Hashable, int]
    z_scores: dict[Hashable, float]
    unexpected: dict[Hashable, int] = field(default_factory=dict)

    @property
    def max_abs_z(self) -> float:
        return max((abs(z) for z in self.z_scores.values()), default=0.0)

    def diagnostic(self) -> str:
        if self.unexpected:
            return f"outcomes outside reference support: {self.unexpected!r}"
        worst = max(self.z_scores, key=lambda o: abs(self.z_scores[o]), default=None)
        return f"max |z| = {self.max_abs_z:.3f} at outcome {worst!r}"


def compare_counts(
    counts: Mapping[Hashable, int], reference: Mapping[Hashable, float], n: int
) -> FidelityReport:
    """Compare observed outcome counts with a reference distribution."""
    z_scores: dict[Hashable, float] = {}
    for outcome, q in reference.items():
        c = counts.get(outcome, 0)
        sd = math.sqrt(n * q * (1.0 - q))
        if sd == 0.0:
            z_scores[outcome] = 0.0 if c == round(n * q) else math.inf
        else:
            z_scores[outcome] = (c - n * q) / sd
    unexpected = {o: c for o, c in counts.items() if o not in reference and c > 0}
    passed = not unexpected and all(abs(z) <= Z_LIMIT for z in z_scores.values())
    return FidelityReport(
        passed=passed,
        n=n,
        counts={o: counts.get(o, 0) for o in reference},
        z_scores=z_scores,
        unexpected=unexpected,
    )


def fidelity_check(
    model: SimModel[Any],
    s: Any,
    a: Any,
    reference: Mapping[Hashable, float],
    n: int,
    seed: int = 0,
) -> FidelityReport:
    """Draw ``n`` uniform p-vectors and compare the outcomes of ``g(s, a, p)``.

    Args:
        model: Model with a discrete next-state support.
        s: State.
        a: Action.
        reference: Intended next-state distribution.
        n: Draws, at least 1000.
        seed: Seed of the p-vectors.

    Returns:
        FidelityReport. ``passed`` is False when any outcome falls outside the
        reference support, whatever the z-scores.

    Example:
        >>> report = fidelity_check(model, s=0, a=3, reference={1: 0.85, 0: 0.15}, n=100_000)
        >>> report.passed
        True
    """
    if n < MIN_DRAWS:
        raise DomainError(f"n must be >= {MIN_DRAWS}, got {n}")
    src = UniformSource(derive_seed(seed, "fidelity"))
    P = src.uniforms(n * model.d_P).reshape(n, model.d_P)

    if model.transition_many is not None:
        outcomes = np.asarray(model.transition_many(s, a, P))
        values, freq = np.unique(outcomes, return_counts=True)
        counts: Counter[Hashable] = Counter(
            {_plain(v): int(c) for v, c in zip(values.tolist(), freq.tolist())}
        )
    else:
        counts = Counter(_plain(model.transition(s, a, P[i])) for i in range(n))

    report = compare_counts(counts, reference, n)
    if not report.passed:
        _log_warning(
            "fidelity_check",
            f"model={model.name} state={s!r} action={a!r} failed",
            diagnostic=report.diagnostic(),
        )
    return report


def _plain(value: Any) -> Hashable:
    out: Hashable = value.item() if isinstance(value, np.generic) else value
    return out
