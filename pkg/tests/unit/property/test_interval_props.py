"""Property-based tests for interval unions.

**Property: Enumeration Is a Bijection**
For any positive index, decoding then encoding gives the index back, and
every decoded union has measure exactly 1/2.

**Property: Evasion**
For any finite point set in [0, 1], the evading union has measure exactly
1/2 and contains none of the points.
"""

from hypothesis import given, settings
from hypothesis import strategies as st
from pypegasus.theory.intervals import (
    HALF,
    IntervalUnion,
    find_evading_union,
    index_of_union,
    measure,
    union_contains,
    union_from_index,
)

unit_floats = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=300)
@given(st.integers(min_value=1, max_value=10**12))
def test_index_round_trip(i):
    u = union_from_index(i)
    assert measure(u) == HALF
    assert index_of_union(u) == i


@settings(max_examples=200)
@given(st.lists(unit_floats, max_size=200))
def test_evading_union(points):
    union, index = find_evading_union(points)

    assert measure(union) == HALF
    assert not any(union_contains(union, p) for p in points)
    assert index >= 1


@settings(max_examples=50)
@given(st.lists(unit_floats, min_size=1, max_size=20))
def test_evading_index_decodes_to_union(points):
    union, index = find_evading_union(points)
    assert union_from_index(index) == union


@st.composite
def half_unions(draw):
    """Random canonical unions of measure 1/2, from integer lengths and gaps."""
    n = draw(st.integers(min_value=1, max_value=6))
    lengths = draw(st.lists(st.integers(1, 50), min_size=n, max_size=n))
    inner = draw(st.lists(st.integers(1, 50), min_size=n - 1, max_size=n - 1))
    lead = draw(st.integers(0, 50))
    trail = draw(st.integers(0 if lead or inner else 1, 50))
    gaps = [lead, *inner, trail]
    length_scale = HALF / sum(lengths)
    gap_scale = HALF / sum(gaps)

    pairs = []
    pos = lead * gap_scale
    for k, length in enumerate(lengths):
        pairs.append((pos, pos + length * length_scale))
        pos += length * length_scale
        if k < n - 1:
            pos += inner[k] * gap_scale
    return IntervalUnion.of(pairs)


@settings(max_examples=200)
@given(half_unions())
def test_union_round_trip(u):
    assert union_from_index(index_of_union(u)) == u
