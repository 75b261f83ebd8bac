import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridtester.errors import UsageError
from gridtester.grid import (
    GridPair,
    Hypergrid,
    Ordering,
    PairFamilyId,
    Side,
    comparable,
    enumerate_H,
    families,
    family_of_pair,
    family_pairs,
    is_adequate,
    lower_class,
    mod_star,
    msd,
    pair_phi,
    partner,
    phi_of_matching,
    precedes,
    side,
    size_of_H,
)

SMALL = [(n, k) for n in (1, 2, 3) for k in range(1, 9) if k**n <= 512]


def test_points_are_lexicographic_last_coordinate_fastest():
    g = Hypergrid(2, 3)
    assert g.points[:4] == ((1, 1), (1, 2), (1, 3), (2, 1))
    assert g.index((3, 3)) == 8
    assert g.point(5) == (2, 3)


def test_invalid_grid_and_points():
    with pytest.raises(UsageError):
        Hypergrid(0, 3)
    with pytest.raises(UsageError):
        Hypergrid(2, 3).index((0, 1))


@pytest.mark.parametrize(
    "x, y, want",
    [((1, 1), (2, 2), Ordering.LESS), ((2, 1), (1, 2), Ordering.INCOMPARABLE), ((3, 3), (3, 3), Ordering.EQUAL)],
)
def test_comparable(x, y, want):
    assert comparable(x, y) is want


def test_comparable_greater_and_precedes():
    assert comparable((2, 2), (1, 2)) is Ordering.GREATER
    assert precedes((1, 2), (1, 3))
    assert not precedes((2, 1), (1, 2))


def test_msd_examples():
    assert msd(12, 3) == 2
    assert msd(0, 3) == 4
    assert msd(8, 3) == 3
    assert msd(1, 0) == 0


def test_phi_examples():
    g = Hypergrid(2, 4)
    assert phi_of_matching([], g) == 0
    assert phi_of_matching([((1, 1), (2, 1))], g) == 3
    assert phi_of_matching([((1, 1), (3, 3))], g) == 2


@given(st.integers(1, 3), st.integers(-2, 2))
def test_phi_invariant_under_single_axis_translation(axis, shift):
    g = Hypergrid(3, 8)
    x, y = (3, 4, 5), (4, 6, 3)
    moved = [tuple(c + shift * (i == axis - 1) for i, c in enumerate(p)) for p in (x, y)]
    assert pair_phi(x, y, g.ell) == pair_phi(*moved, g.ell)


def test_enumerate_H_small_cases():
    pairs = [(p.lo[0], p.hi[0]) for p in enumerate_H(Hypergrid(1, 4))]
    assert sorted(pairs) == sorted([(1, 2), (2, 3), (3, 4), (1, 3), (2, 4)])
    assert [tuple(p) for p in enumerate_H(Hypergrid(1, 2))] == [((1,), (2,))]
    assert size_of_H(Hypergrid(2, 2)) == 4
    assert size_of_H(Hypergrid(1, 1)) == 0


@pytest.mark.parametrize("n, k", SMALL)
def test_size_of_H_matches_enumeration(n, k):
    g = Hypergrid(n, k)
    pairs = list(enumerate_H(g))
    assert len(pairs) == size_of_H(g) == len(set(pairs))


@pytest.mark.parametrize(
    "lo, hi, fid",
    [((1,), (2,), PairFamilyId(1, 0, 0)), ((2,), (3,), PairFamilyId(1, 0, 1)), ((2,), (4,), PairFamilyId(1, 1, 0))],
)
def test_family_of_pair_examples(lo, hi, fid):
    assert family_of_pair(GridPair(lo, hi)) == fid


@pytest.mark.parametrize("n, k", SMALL)
def test_families_partition_H_into_matchings(n, k):
    g = Hypergrid(n, k)
    seen = set()
    for fid in families(g):
        members = family_pairs(g, fid)
        endpoints = [p for pair in members for p in pair]
        assert len(endpoints) == len(set(endpoints)), fid
        for pair in members:
            assert family_of_pair(pair) == fid
            # exactly one endpoint has axis coordinate mod* 2^(b+1) above 2^b
            m = 1 << (fid.scale + 1)
            high = [mod_star(p[fid.axis - 1], m) > m // 2 for p in pair]
            assert sum(high) == 1
            assert lower_class(fid, pair.lo) != lower_class(fid, pair.hi)
        seen.update(members)
    assert seen == set(enumerate_H(g))


def test_partner_examples_on_the_line():
    g = Hypergrid(1, 4)
    h0 = PairFamilyId(1, 0, 0)
    assert partner(g, h0, (1,)) == (2,)
    assert partner(g, h0, (2,)) == (1,)
    for x in g.points:
        y = partner(g, h0, x)
        assert y is None or partner(g, h0, y) == x
    # H^0 at scale 1 is {(1,3), (2,4)}, so every point of [4] is matched
    h01 = PairFamilyId(1, 1, 0)
    assert [tuple(p) for p in family_pairs(g, h01)] == [((1,), (3,)), ((2,), (4,))]
    assert partner(g, h01, (3,)) == (1,)
    assert partner(g, PairFamilyId(1, 1, 1), (3,)) is None


def test_side_examples():
    h0 = PairFamilyId(1, 0, 0)
    assert side(Hypergrid(1, 2), h0, (1,)) is Side.LOWER
    assert side(Hypergrid(1, 2), h0, (2,)) is Side.UPPER
    g = Hypergrid(1, 4)
    h01 = PairFamilyId(1, 1, 0)
    assert side(g, h01, (2,)) is Side.LOWER
    assert side(g, h01, (4,)) is Side.UPPER
    assert side(g, PairFamilyId(1, 1, 1), (1,)) is Side.NOT_IN_FAMILY


def test_adequacy():
    g = Hypergrid(1, 4)
    for fid in families(g):
        assert is_adequate(g, fid, [])
    # H^1_{1,0} = {(2,3)} leaves 1 and 4 unmatched
    assert not is_adequate(g, PairFamilyId(1, 0, 1), [((1,), (4,))])
    assert is_adequate(g, PairFamilyId(1, 0, 1), [((2,), (3,))])
    cube = Hypergrid(3, 2)
    pairs = list(itertools.combinations(cube.points, 2))
    for fid in families(cube, include_empty=False):
        assert is_adequate(cube, fid, pairs)


def test_empty_families_are_listed_but_have_no_pairs():
    g = Hypergrid(1, 2)
    fids = families(g)
    assert PairFamilyId(1, 0, 1) in fids
    assert family_pairs(g, PairFamilyId(1, 0, 1)) == []
    assert families(g, include_empty=False) == [PairFamilyId(1, 0, 0)]
