"""Finite unions of closed intervals with rational endpoints in [0, 1].

Everything here is exact: endpoints are ``Fraction`` and floats are taken at
their exact binary value, so membership and measure never round.

Enumeration of the unions of measure 1/2
----------------------------------------

A canonical union (sorted, with touching or overlapping intervals merged)
splits [0, 1] into alternating pieces: an optional leading gap, then
interval, gap, interval, ..., interval, then an optional trailing gap. The
``N`` interval lengths sum to 1/2 and so do the ``G = N - 1 + lead + trail``
gap lengths. Each group is stored as stick-breaking ratios in (0, 1): piece
``k`` is ``ratio_k`` times what is left of 1/2, and the last piece takes the
rest. That leaves ``L = (N - 1) + (G - 1)`` ratios, interval ratios first.

The index of a union is ``2 * seq_code + bit + 1`` where ``seq_code`` encodes
the ratio list and ``bit`` selects the gap flags given the parity of ``L``:

=========  =====  ============  ===============
``L``      bit    (lead, trail)  ``N``
=========  =====  ============  ===============
odd        0      (0, 0)         ``(L + 3) / 2``
odd        1      (1, 1)         ``(L + 1) / 2``
even       0      (1, 0)         ``(L + 2) / 2``
even       1      (0, 1)         ``(L + 2) / 2``
=========  =====  ============  ===============

A ratio in (0, 1) is written as its continued fraction ``[0; a_1, ..., a_k]``
(``a_k >= 2``), i.e. the positive integers ``a_1, ..., a_{k-1}, a_k - 1``.
Sequences of integers become strings of bijective base-3 digits, with digits
1 and 2 spelling a bijective base-2 number and digit 3 separating numbers.
Every step is a bijection, so every positive integer names exactly one union
and index sizes grow with the bit size of the endpoints, not their value.

Example:
    >>> union_from_index(1), union_from_index(2)
    (IntervalUnion([1/2, 1]), IntervalUnion([0, 1/2]))
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from numbers import Rational

from pypegasus.exceptions import DomainError

HALF = Fraction(1, 2)

Number = Fraction | int | float


def as_fraction(x: Number) -> Fraction:
    """Exact rational value of ``x``; floats keep their binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if not math.isfinite(x):
        raise DomainError(f"not a finite number: {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted, disjoint, non-touching closed intervals inside [0, 1].

    Build one with :meth:`of`, which canonicalizes its input.
    """

    intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def of(cls, pairs: Iterable[tuple[Number, Number]]) -> IntervalUnion:
        """Canonical union of ``[a, b]`` pairs (sort, then merge overlaps and touches)."""
        cleaned = []
        for a, b in pairs:
            fa, fb = as_fraction(a), as_fraction(b)
            if not 0 <= fa < fb <= 1:
                raise DomainError(f"need 0 <= a < b <= 1, got [{fa}, {fb}]")
            cleaned.append((fa, fb))
        cleaned.sort()
        merged: list[tuple[Fraction, Fraction]] = []
        for a, b in cleaned:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return cls(tuple(merged))

    @cached_property
    def starts(self) -> list[Fraction]:
        return [a for a, _ in self.intervals]

    def measure(self) -> Fraction:
        return measure(self)

    def __contains__(self, x: Number) -> bool:
        return union_contains(self, x)

    def __len__(self) -> int:
        return len(self.intervals)

    def __repr__(self) -> str:
        body = " u ".join(f"[{a}, {b}]" for a, b in self.intervals)
        return f"IntervalUnion({body})"


def measure(u: IntervalUnion) -> Fraction:
    """Total length, exactly.

    Example:
        >>> measure(IntervalUnion.of([(0, Fraction(1, 4)), (Fraction(1, 2), Fraction(3, 4))]))
        Fraction(1, 2)
    """
    return sum((b - a for a, b in u.intervals), Fraction(0))


def union_contains(u: IntervalUnion, x: Number) -> bool:
    """Exact membership of ``x`` (endpoints included)."""
    q = as_fraction(x)
    i = bisect.bisect_right(u.starts, q) - 1
    return i >= 0 and q <= u.intervals[i][1]


# Bijective numerals


@lru_cache(maxsize=256)
def _pow(base: int, k: int) -> int:
    return base**k


def _from_digits(digits: Sequence[int], base: int) -> int:
    """Ordinary positional value of ``digits`` (most significant first)."""
    if len(digits) <= 64:
        n = 0
        for d in digits:
            n = n * base + d
        return n
    half = len(digits) // 2
    return _from_digits(digits[:-half], base) * _pow(base, half) + _from_digits(
        digits[-half:], base
    )


def _to_digits(n: int, base: int, width: int) -> list[int]:
    """``width`` ordinary digits of ``n``, most significant first."""
    if width <= 64:
        out = [0] * width
        for i in range(width - 1, -1, -1):
            n, out[i] = divmod(n, base)
        return out
    half = width // 2
    hi, lo = divmod(n, _pow(base, half))
    return _to_digits(hi, base, width - half) + _to_digits(lo, base, half)


def _repunit(base: int, length: int) -> int:
    """Number of bijective numerals shorter than ``length``."""
    return (_pow(base, length) - 1) // (base - 1)


def to_bijective(n: int, base: int) -> list[int]:
    """Bijective base-``base`` digits (each in 1..base) of ``n >= 0``; 0 is empty."""
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    x = n * (base - 1) + 1
    length = max(int(x.bit_length() / math.log2(base)) - 1, 0)
    while _pow(base, length + 1) <= x:
        length += 1
    while length > 0 and _pow(base, length) > x:
        length -= 1
    return [d + 1 for d in _to_digits(n - _repunit(base, length), base, length)]


def from_bijective(digits: Sequence[int], base: int) -> int:
    return _repunit(base, len(digits)) + _from_digits([d - 1 for d in digits], base)


def _pack(values: Sequence[int]) -> int:
    """Nonempty sequence of naturals -> natural."""
    digits: list[int] = []
    for i, v in enumerate(values):
        if i:
            digits.append(3)
        digits.extend(to_bijective(v, 2))
    return from_bijective(digits, 3)


def _unpack(code: int) -> list[int]:
    parts: list[list[int]] = [[]]
    for d in to_bijective(code, 3):
        if d == 3:
            parts.append([])
        else:
            parts[-1].append(d)
    return [from_bijective(p, 2) for p in parts]


def encode_sequence(values: Sequence[int]) -> int:
    """Finite (possibly empty) sequence of naturals -> natural, bijectively."""
    return 0 if not values else _pack(values) + 1


def decode_sequence(code: int) -> list[int]:
    return [] if code == 0 else _unpack(code - 1)


def encode_ratio(q: Fraction) -> int:
    """Rational in (0, 1) -> natural, through its continued fraction."""
    if not 0 < q < 1:
        raise DomainError(f"ratio must be in (0, 1), got {q}")
    terms = []
    num, den = q.denominator, q.numerator
    while den:
        a, r = divmod(num, den)
        terms.append(a)
        num, den = den, r
    terms[-1] -= 1
    return _pack([t - 1 for t in terms])


def decode_ratio(code: int) -> Fraction:
    terms = [t + 1 for t in _unpack(code)]
    terms[-1] += 1
    x = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        x = a + 1 / x
    return 1 / x


# Gap flags as a function of (parity of L, bit); see the module docstring.
_FLAGS = {(1, 0): (0, 0), (1, 1): (1, 1), (0, 0): (1, 0), (0, 1): (0, 1)}
_BITS = {(parity, flags): bit for (parity, bit), flags in _FLAGS.items()}


def _break(total: Fraction, ratios: Sequence[Fraction]) -> list[Fraction]:
    pieces = []
    rest = total
    for r in ratios:
        piece = r * rest
        pieces.append(piece)
        rest -= piece
    pieces.append(rest)
    return pieces


def _ratios(pieces: Sequence[Fraction]) -> list[Fraction]:
    out = []
    rest = sum(pieces, Fraction(0))
    for piece in pieces[:-1]:
        out.append(piece / rest)
        rest -= piece
    return out


def union_from_index(i: int) -> IntervalUnion:
    """The ``i``-th union of measure exactly 1/2, ``i >= 1``."""
    if i < 1:
        raise DomainError(f"union index must be >= 1, got {i}")
    seq_code, bit = divmod(i - 1, 2)
    ratios = [decode_ratio(c) for c in decode_sequence(seq_code)]
    n_ratios = len(ratios)
    lead, trail = _FLAGS[n_ratios % 2, bit]
    n_intervals = (n_ratios + 3 - lead - trail) // 2
    lengths = _break(HALF, ratios[: n_intervals - 1])
    gaps = _break(HALF, ratios[n_intervals - 1 :])

    pos = Fraction(0)
    g = iter(gaps)
    if lead:
        pos += next(g)
    pairs = []
    for k, length in enumerate(lengths):
        pairs.append((pos, pos + length))
        pos += length
        if k < n_intervals - 1:
            pos += next(g)
    return IntervalUnion(tuple(pairs))


def index_of_union(u: IntervalUnion) -> int:
    """Inverse of :func:`union_from_index`.

    Raises:
        DomainError: The measure of ``u`` is not exactly 1/2.
    """
    if measure(u) != HALF:
        raise DomainError(f"only unions of measure 1/2 are enumerated, got {measure(u)}")
    u = IntervalUnion.of(u.intervals)
    starts = [a for a, _ in u.intervals]
    ends = [b for _, b in u.intervals]
    lead = int(starts[0] > 0)
    trail = int(ends[-1] < 1)
    gaps = [starts[0]] if lead else []
    gaps += [a - b for a, b in zip(starts[1:], ends[:-1])]
    if trail:
        gaps.append(1 - ends[-1])
    ratios = _ratios([b - a for a, b in u.intervals]) + _ratios(gaps)
    bit = _BITS[len(ratios) % 2, (lead, trail)]
    seq_code = encode_sequence([encode_ratio(r) for r in ratios])
    return 2 * seq_code + bit + 1


def find_evading_union(points: Iterable[Number]) -> tuple[IntervalUnion, int]:
    """A union of measure exactly 1/2 that contains none of ``points``.

    Endpoints sit on a dyadic grid of step ``2**-K`` with ``2**K >= 8 (n + 1)``.
    Each gap between neighbouring points contributes the largest grid interval
    strictly inside it; gaps are taken left to right and the last one is
    trimmed so the total is 1/2. At most 1/4 is lost to the grid, so the
    construction always succeeds.

    Example:
        >>> find_evading_union([0.1])[0]
        IntervalUnion([0, 1/16] u [1/8, 9/16])
    """
    pts = sorted({as_fraction(p) for p in points})
    if pts and not (0 <= pts[0] and pts[-1] <= 1):
        raise DomainError("points must lie in [0, 1]")
    k = max(3, (8 * (len(pts) + 1) - 1).bit_length())
    step = Fraction(1, 2**k)
    fences = [-step, *pts, 1 + step]

    pairs: list[tuple[Fraction, Fraction]] = []
    need = HALF
    for lo, hi in zip(fences, fences[1:]):
        a = Fraction(math.floor(lo / step)) * step + step
        b = Fraction(math.ceil(hi / step)) * step - step
        if a >= b:
            continue
        b = min(b, a + need)
        pairs.append((a, b))
        need -= b - a
        if need == 0:
            break
    union = IntervalUnion(tuple(pairs))
    return union, index_of_union(union)


__all__ = [
    "IntervalUnion",
    "as_fraction",
    "decode_ratio",
    "decode_sequence",
    "encode_ratio",
    "encode_sequence",
    "find_evading_union",
    "from_bijective",
    "index_of_union",
    "measure",
    "to_bijective",
    "union_contains",
    "union_from_index",
]
