"""Tests for exact interval unions and their enumeration."""

from __future__ import annotations

from fractions import Fraction as F

import numpy as np
import pytest
from pypegasus.exceptions import DomainError
from pypegasus.theory.intervals import (
    HALF,
    IntervalUnion,
    decode_ratio,
    decode_sequence,
    encode_ratio,
    encode_sequence,
    find_evading_union,
    from_bijective,
    index_of_union,
    measure,
    to_bijective,
    union_contains,
    union_from_index,
)


@pytest.mark.parametrize(
    "pairs,expected",
    [
        pytest.param([(F(1, 3), F(5, 6))], HALF, id="single"),
        pytest.param([(0, F(1, 4)), (F(1, 2), F(3, 4))], HALF, id="two_pieces"),
        pytest.param([], F(0), id="empty"),
    ],
)
def test_measure(pairs, expected):
    assert measure(IntervalUnion.of(pairs)) == expected


def test_canonical_form_merges_and_sorts():
    """Overlapping and touching intervals merge."""
    u = IntervalUnion.of([(F(1, 2), F(3, 4)), (0, F(1, 4)), (F(1, 4), F(1, 3)), (0.6, 0.7)])
    assert u.intervals == ((F(0), F(1, 3)), (F(1, 2), F(3, 4)))


@pytest.mark.parametrize(
    "pair",
    [
        pytest.param((F(1, 2), F(1, 2)), id="empty_interval"),
        pytest.param((F(-1, 4), F(1, 2)), id="below_zero"),
        pytest.param((0, F(5, 4)), id="above_one"),
        pytest.param((0, float("nan")), id="nan"),
    ],
)
def test_bad_intervals(pair):
    with pytest.raises(DomainError):
        IntervalUnion.of([pair])


def test_membership_is_exact():
    """Endpoints are included; the float nearest 1/3 is not 1/3."""
    u = IntervalUnion.of([(F(1, 3), F(1, 2))])
    assert union_contains(u, F(1, 3))
    assert 0.5 in u
    assert 1 / 3 not in u
    assert not union_contains(u, F(2, 3))


@pytest.mark.parametrize("n", [0, 1, 2, 3, 7, 12345, 2**200 + 17])
@pytest.mark.parametrize("base", [2, 3])
def test_bijective_numerals(n, base):
    digits = to_bijective(n, base)
    assert all(1 <= d <= base for d in digits)
    assert from_bijective(digits, base) == n


def test_sequence_code():
    assert encode_sequence([]) == 0
    for values in ([0], [0, 0], [5, 0, 3], [2**70]):
        assert decode_sequence(encode_sequence(values)) == values
    assert [encode_sequence(decode_sequence(c)) for c in range(50)] == list(range(50))


def test_ratio_code():
    for q in (F(1, 2), F(1, 3), F(2, 3), F(355, 1000), F(1, 2**60 + 1)):
        assert decode_ratio(encode_ratio(q)) == q
    assert [encode_ratio(decode_ratio(c)) for c in range(50)] == list(range(50))


def test_first_unions():
    assert union_from_index(1) == IntervalUnion.of([(HALF, 1)])
    assert union_from_index(2) == IntervalUnion.of([(0, HALF)])


def test_index_round_trip():
    """index -> union -> index is the identity, and every union has measure 1/2."""
    for i in range(1, 201):
        u = union_from_index(i)
        assert measure(u) == HALF
        assert index_of_union(u) == i


def test_union_round_trip():
    """[1/3, 5/6] gets a finite index and comes back in canonical form."""
    u = IntervalUnion.of([(F(1, 3), F(5, 6))])
    assert union_from_index(index_of_union(u)) == u


def test_index_of_union_rejects_other_measures():
    with pytest.raises(DomainError):
        index_of_union(IntervalUnion.of([(0, F(1, 3))]))


def test_union_from_index_rejects_zero():
    with pytest.raises(DomainError):
        union_from_index(0)


def test_evading_single_point():
    union, index = find_evading_union([0.1])
    assert union == IntervalUnion.of([(0, F(1, 16)), (F(1, 8), F(9, 16))])
    assert 0.1 not in union
    assert union_from_index(index) == union


def test_evading_no_points():
    union, index = find_evading_union([])
    assert union == IntervalUnion.of([(0, HALF)])
    assert index == 2


def test_evading_many_points():
    """10^4 seeded points are all excluded and the measure is exactly 1/2."""
    points = np.random.default_rng(2024).random(10_000)
    union, _ = find_evading_union(points.tolist())

    assert measure(union) == HALF
    assert not any(union_contains(union, p) for p in points.tolist())


def test_evading_endpoints():
    """Points at 0 and 1 are avoided too."""
    union, _ = find_evading_union([0.0, 1.0, 0.5])
    assert measure(union) == HALF
    assert not any(p in union for p in (0.0, 0.5, 1.0))


def test_evading_rejects_out_of_range():
    with pytest.raises(DomainError):
        find_evading_union([1.5])
