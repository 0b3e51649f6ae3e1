from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spdrules import (
    AgentPartition,
    AlternativeSpace,
    ExtElem,
    Kind,
    Profile,
    Ranking,
    Side,
    enumerate_rankings,
    extended_order_elements,
    pair_preference,
    restricted_extremum,
)
from spdrules.domain import as_rational, check_profile


def _labels(space, elems):
    return [space.label(e) for e in elems]


def test_extended_order_three_points():
    space = AlternativeSpace.of(1, 2, 3)
    assert _labels(space, extended_order_elements(space)) == ["1", "(1,2)", "2", "(2,3)", "3"]


def test_extended_order_single_point():
    space = AlternativeSpace.of(5)
    assert _labels(space, extended_order_elements(space)) == ["5"]
    assert space.pairs == () and space.min_pair is None


def test_extended_order_four_points():
    space = AlternativeSpace.of(1, 2, 3, 4)
    elems = extended_order_elements(space)
    assert len(elems) == 7
    assert _labels(space, elems[-2:]) == ["(3,4)", "4"]
    assert [e.key for e in elems] == list(range(7))


def test_space_extremes_and_interior():
    space = AlternativeSpace.of(1, "3/2", 2, 4)
    assert space.points[1] == Fraction(3, 2)
    assert _labels(space, space.interior) == ["3/2", "2"]
    assert space.label(space.max_pair) == "(2,4)"
    assert space.label(space.min_pair) == "(1,3/2)"


def test_space_rejects_unsorted_and_floats():
    with pytest.raises(ValueError):
        AlternativeSpace.of(1, 1)
    with pytest.raises(ValueError):
        AlternativeSpace.of(2, 1)
    with pytest.raises(TypeError):
        AlternativeSpace.of(1, 2.5)
    with pytest.raises(ValueError):
        AlternativeSpace(())


def test_as_rational_forms():
    assert as_rational("3/2") == Fraction(3, 2)
    assert as_rational(4) == 4
    with pytest.raises(ValueError):
        as_rational("1.5")
    with pytest.raises(TypeError):
        as_rational(True)


@given(st.integers(0, 40), st.integers(0, 40))
def test_interleaved_order_is_strict(k1, k2):
    e, f = ExtElem(k1), ExtElem(k2)
    assert (e < f) + (f < e) + (e == f) == 1


@given(st.integers(0, 20))
def test_pairs_sit_between_endpoints(i):
    p = ExtElem.pair(i)
    assert ExtElem.single(i) < p < ExtElem.single(i + 1)
    assert (p.left, p.right) == (i, i + 1)


def test_pair_preference_cases():
    space = AlternativeSpace.of(1, 2, 3, 4)
    pair = space.max_pair
    assert pair_preference(Kind.PEAKED, space.index_of(1), pair) is Side.LEFT
    assert pair_preference(Kind.DIPPED, space.index_of(2), pair) is Side.RIGHT
    assert pair_preference(Kind.DIPPED, space.index_of(4), pair) is Side.LEFT
    with pytest.raises(ValueError):
        pair_preference(Kind.PEAKED, 0, ExtElem.single(1))


def _peaked_by_definition(order) -> bool:
    # Along each side of the peak, alternatives nearer the peak come first.
    peak = order[0]
    rank = {x: r for r, x in enumerate(order)}
    for x in order:
        for y in order:
            same_side = (x - peak) * (y - peak) > 0
            if same_side and abs(x - peak) < abs(y - peak) and rank[x] > rank[y]:
                return False
    return True


@pytest.mark.parametrize("m", range(1, 7))
def test_ranking_enumeration_matches_permutation_filter(m):
    brute = sorted(p for p in permutations(range(m)) if _peaked_by_definition(p))
    peaked = [r.order for r in enumerate_rankings(m, Kind.PEAKED)]
    dipped = [r.order for r in enumerate_rankings(m, Kind.DIPPED)]
    assert len(peaked) == 2 ** (m - 1)
    assert sorted(peaked) == brute
    assert sorted(dipped) == sorted(tuple(reversed(p)) for p in brute)


def test_three_point_peaked_rankings():
    orders = [r.order for r in enumerate_rankings(AlternativeSpace.of(1, 2, 3), Kind.PEAKED)]
    assert orders == [(0, 1, 2), (1, 0, 2), (1, 2, 0), (2, 1, 0)]
    assert len(enumerate_rankings(1, Kind.PEAKED)) == 1


def test_restricted_extremum():
    assert restricted_extremum(Ranking(Kind.PEAKED, (1, 2, 0))) == 1
    assert restricted_extremum(Ranking(Kind.DIPPED, (0, 2, 1))) == 1
    for r in enumerate_rankings(5, Kind.PEAKED):
        rev = Ranking(Kind.DIPPED, tuple(reversed(r.order)))
        assert restricted_extremum(r) == restricted_extremum(rev)


@pytest.mark.parametrize("m", range(2, 7))
def test_pair_preference_agrees_with_full_rankings(m):
    for kind in Kind:
        for r in enumerate_rankings(m, kind):
            for i in range(m - 1):
                pair = ExtElem.pair(i)
                expect = Side.LEFT if r.prefers(i, i + 1) else Side.RIGHT
                assert pair_preference(kind, restricted_extremum(r), pair) is expect


def test_ranking_positions():
    r = Ranking(Kind.PEAKED, (2, 1, 3, 0))
    assert r.position() == (3, 1, 0, 2)
    assert r.prefers(1, 0) and not r.prefers(0, 3)


def test_partition_and_profile():
    part = AgentPartition(2, 3)
    assert part.n == 5 and list(part.dipped) == [2, 3, 4]
    assert part.kind_of(1) is Kind.PEAKED and part.kind_of(2) is Kind.DIPPED
    with pytest.raises(ValueError):
        AgentPartition(0, 0)
    prof = Profile.from_flat((0, 1, 2, 3, 0), 2)
    assert prof.peaks == (0, 1) and prof.location(3) == 3
    assert prof.replace(4, 2).dips == (2, 3, 2)


def test_check_profile_rejects_bad_dimensions():
    space = AlternativeSpace.of(1, 2)
    with pytest.raises(ValueError):
        check_profile(space, AgentPartition(1, 1), Profile((0,), ()))
    with pytest.raises(ValueError):
        check_profile(space, AgentPartition(1, 1), Profile((0,), (2,)))
