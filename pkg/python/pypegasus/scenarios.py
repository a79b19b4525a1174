"""Scenarios: pre-drawn randomness for common-random-number evaluation.

A scenario is an initial state plus an ``h x d_P`` block of uniform numbers.
Rolling a policy out on a scenario uses row ``t`` of the block as the ``p`` of
step ``t``, so once the scenarios are drawn, the value of every policy on them
is a deterministic number.

Scenario ``i`` of ``draw_scenarios(model, m, h, seed)`` depends only on
``(seed, i)``: its stream key is ``stream_key(seed, i)``, the initial-state
sampler reads from that stream first, and the noise block takes the next
``h * d_P`` draws in row-major order.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import NDArray

from pypegasus._internal._rng import UniformSource, stream_key
from pypegasus.exceptions import DimensionMismatchError, DomainError
from pypegasus.model import SimModel


@dataclass(frozen=True, eq=False)
class Scenario:
    """One realized initial state with its noise block.

    Attributes:
        initial_state: ``s_0``.
        noise: Array of shape ``(h, d_P)`` with entries in [0, 1].
        index: Position in the set it was drawn in.
    """

    initial_state: Any
    noise: NDArray[np.float64]
    index: int = 0

    def __post_init__(self) -> None:
        noise = np.asarray(self.noise, dtype=np.float64)
        if noise.ndim != 2:
            raise DimensionMismatchError("noise rank", 2, noise.ndim)
        if noise.size and (noise.min() < 0.0 or noise.max() > 1.0):
            raise DomainError("noise entries must lie in [0, 1]")
        noise.setflags(write=False)
        object.__setattr__(self, "noise", noise)

    @property
    def horizon(self) -> int:
        return int(self.noise.shape[0])

    @property
    def width(self) -> int:
        return int(self.noise.shape[1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            _states_equal(self.initial_state, other.initial_state)
            and self.noise.shape == other.noise.shape
            and bool(np.array_equal(self.noise, other.noise))
        )

    def __hash__(self) -> int:
        return hash((self.noise.shape, self.noise.tobytes()))


def _states_equal(a: Any, b: Any) -> bool:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return bool(np.array_equal(a, b))
    return bool(a == b)


def draw_scenario(model: SimModel[Any], h: int, seed: int, index: int) -> Scenario:
    """Draw scenario ``index`` of the set keyed by ``seed``."""
    src = UniformSource(stream_key(seed, index))
    s0 = model.initial(src)
    noise = src.uniforms(h * model.d_P).reshape(h, model.d_P)
    return Scenario(initial_state=s0, noise=noise, index=index)


def draw_scenarios(model: SimModel[Any], m: int, h: int, seed: int) -> list[Scenario]:
    """Draw ``m`` scenarios of horizon ``h``.

    Args:
        model: Supplies the initial-state sampler and ``d_P``.
        m: Number of scenarios, at least 1.
        h: Noise rows per scenario, at least 1.
        seed: 64-bit seed. Same arguments give bit-identical scenarios.

    Returns:
        List of ``m`` scenarios.

    Raises:
        DomainError: ``m < 1`` or ``h < 1``.

    Example:
        >>> from pypegasus.envs.gridworld import build_gridworld
        >>> scenarios = draw_scenarios(build_gridworld(), m=3, h=2, seed=7)
        >>> scenarios[0].noise.shape
        (2, 1)
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if h < 1:
        raise DomainError(f"h must be >= 1, got {h}")
    return [draw_scenario(model, h, seed, i) for i in range(m)]


def check_shape(model: SimModel[Any], scenarios: Sequence[Scenario], h: int) -> None:
    """Raise if any scenario is too short for ``h`` or has the wrong width."""
    for sc in scenarios:
        if sc.width != model.d_P:
            raise DimensionMismatchError("noise width", model.d_P, sc.width)
        if sc.horizon < h:
            raise DimensionMismatchError("noise rows", h, sc.horizon)


def stack_noise(scenarios: Sequence[Scenario], h: int) -> NDArray[np.float64]:
    """Noise of many scenarios as one ``(m, h, d_P)`` array."""
    return np.stack([sc.noise[:h] for sc in scenarios])


# Text codec


def _default_encode(state: Any) -> list[float]:
    return [float(v) for v in np.atleast_1d(np.asarray(state, dtype=np.float64))]


def _default_decode(fields: list[float]) -> Any:
    if len(fields) == 1 and float(fields[0]).is_integer():
        return int(fields[0])
    return np.asarray(fields, dtype=np.float64)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def dump_scenarios(
    scenarios: Sequence[Scenario],
    encode: Callable[[Any], list[float]] | None = None,
) -> str:
    """Serialize scenarios, one per line.

    The first line is ``# scenarios m=<m> h=<h> d_P=<d_P> state_fields=<k>``. Each
    record holds the ``k`` state fields, then the noise in row-major order, as
    decimals with 17 significant digits separated by single spaces.

    Args:
        scenarios: Non-empty, all of one shape.
        encode: ``state -> list[float]``. Defaults to flattening numbers/arrays.
    """
    if not scenarios:
        raise DomainError("nothing to serialize")
    enc = encode or _default_encode
    h, width = scenarios[0].noise.shape
    k = len(enc(scenarios[0].initial_state))
    lines = [f"# scenarios m={len(scenarios)} h={h} d_P={width} state_fields={k}"]
    for sc in scenarios:
        if sc.noise.shape != (h, width):
            raise DimensionMismatchError("noise rows", h, sc.horizon)
        fields = enc(sc.initial_state) + sc.noise.reshape(-1).tolist()
        lines.append(" ".join(_fmt(v) for v in fields))
    return "\n".join(lines) + "\n"


def load_scenarios(
    text: str,
    decode: Callable[[list[float]], Any] | None = None,
) -> list[Scenario]:
    """Parse the output of :func:`dump_scenarios`. Floats round-trip exactly."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# scenarios"):
        raise DomainError("missing '# scenarios' header line")
    header = {key: val for key, _, val in (tok.partition("=") for tok in lines[0].split()[2:])}
    h, width, k = int(header["h"]), int(header["d_P"]), int(header["state_fields"])
    dec = decode or _default_decode
    out: list[Scenario] = []
    for i, line in enumerate(lines[1:]):
        values = [float(tok) for tok in line.split()]
        if len(values) != k + h * width:
            raise DimensionMismatchError("record length", k + h * width, len(values))
        noise = np.asarray(values[k:], dtype=np.float64).reshape(h, width)
        out.append(Scenario(initial_state=dec(values[:k]), noise=noise, index=i))
    if len(out) != int(header["m"]):
        raise DimensionMismatchError("scenario count", int(header["m"]), len(out))
    return out
