"""Counter-based SplitMix64 streams.

Every random number in pypegasus comes from here. Draw ``k`` of the stream keyed
by ``key`` is ``mix64(key + (k + 1) * GOLDEN)``, so any draw can be computed
without the ones before it, and a scenario is a pure function of (seed, index).
Unit floats take the top 53 bits: ``(x >> 11) * 2**-53`` lies in ``[0, 1)``.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy.special import ndtri

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 2.0**-53


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int (taken mod 2**64)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: NDArray[np.uint64]) -> NDArray[np.uint64]:
    """Vectorized :func:`mix64`; wraps mod 2**64 like the scalar version."""
    with np.errstate(over="ignore"):
        z = np.asarray(z, dtype=np.uint64)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        return z ^ (z >> np.uint64(31))


def stream_key(seed: int, index: int) -> int:
    """Key of sub-stream ``index`` under ``seed``."""
    return mix64(seed + (index + 1) * GOLDEN)


def derive_seed(seed: int, *labels: int | str) -> int:
    """Fold labels into a seed, e.g. ``derive_seed(seed, "trial", 3)``."""
    h = mix64(seed)
    for label in labels:
        if isinstance(label, str):
            for byte in label.encode("utf-8"):
                h = mix64(h ^ byte)
            h = mix64(h + GOLDEN)
        else:
            h = mix64(h ^ (label & MASK64))
    return h


def raw_draws(key: int, start: int, n: int) -> NDArray[np.uint64]:
    """Raw 64-bit draws ``start .. start+n-1`` of the stream ``key``."""
    with np.errstate(over="ignore"):
        counters = np.arange(start + 1, start + n + 1, dtype=np.uint64)
        z = np.uint64(key & MASK64) + counters * np.uint64(GOLDEN)
    return mix64_array(z)


def to_unit(x: NDArray[np.uint64]) -> NDArray[np.float64]:
    """Map raw draws to floats in [0, 1)."""
    return (x >> np.uint64(11)).astype(np.float64) * _INV53


def to_open_unit(x: NDArray[np.uint64]) -> NDArray[np.float64]:
    """Map raw draws to floats in (0, 1); safe for inverse CDFs."""
    return ((x >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53


class UniformSource:
    """Sequential reader over one stream.

    Initial-state samplers receive one of these; whatever they consume comes
    before the scenario's noise block.

    Example:
        >>> src = UniformSource(stream_key(42, 0))
        >>> u = src.uniform()
        >>> block = src.uniforms(10)
    """

    def __init__(self, key: int, start: int = 0):
        self.key = key & MASK64
        self.position = start

    def _take(self, n: int) -> NDArray[np.uint64]:
        out = raw_draws(self.key, self.position, n)
        self.position += n
        return out

    def uniform(self) -> float:
        return float(to_unit(self._take(1))[0])

    def uniforms(self, n: int) -> NDArray[np.float64]:
        return to_unit(self._take(n))

    def uniform_in(self, low: float, high: float) -> float:
        return low + (high - low) * self.uniform()

    def integers(self, low: int, high: int, n: int) -> NDArray[np.int64]:
        """``n`` integers in ``[low, high]`` by ``low + floor(u * (high - low + 1))``."""
        span = high - low + 1
        return low + np.floor(self.uniforms(n) * span).astype(np.int64)

    def normals(self, n: int) -> NDArray[np.float64]:
        """Standard normals through the inverse normal CDF."""
        return np.asarray(ndtri(to_open_unit(self._take(n))), dtype=np.float64)
