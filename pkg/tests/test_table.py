import itertools

import pytest

from gridtester.errors import UsageError
from gridtester.grid import Hypergrid, enumerate_H, padded_side, pad_offset
from gridtester.properties import PropertyParams, check_property, pair_check
from gridtester.table import FunctionTable, embed_point, pad
from gridtester.values import INF, NEG_INF

MONO = PropertyParams.monotone()


def test_table_length_is_checked():
    with pytest.raises(UsageError):
        FunctionTable.from_values(1, 3, [1, 2])


def test_lookup_and_update():
    f = FunctionTable.from_values(2, 2, [0, 1, 2, 3])
    assert f[(2, 1)] == 2
    g = f.with_values({(1, 1): 9})
    assert g.differing_points(f) == [(1, 1)]
    assert f[(1, 1)] == 0


def test_pad_geometry():
    assert padded_side(2) == 16
    assert pad_offset(2) == 4
    f = FunctionTable.from_values(1, 2, [7, 8])
    fp = pad(f)
    assert fp.grid == Hypergrid(1, 16)
    assert [fp[(x,)] for x in (5, 6)] == [7, 8]
    assert fp[(4,)] is NEG_INF and fp[(7,)] is INF
    assert embed_point((1,), 2) == (5,)


def test_pad_corner_points_take_minus_infinity():
    f = FunctionTable.from_values(2, 3, list(range(9)))
    fp = pad(f)
    assert fp[(1, 16)] is NEG_INF
    assert fp[(16, 16)] is INF
    assert fp[embed_point((2, 3), 3)] == 5


@pytest.mark.parametrize("values", list(itertools.product(range(3), repeat=3)))
def test_pad_preserves_monotonicity_and_violations(values):
    f = FunctionTable.from_values(1, 3, list(values))
    fp = pad(f)
    assert (check_property(f, MONO) is None) == (check_property(fp, MONO) is None)
    raw = sum(not pair_check(f, MONO, p) for p in enumerate_H(f.grid))
    padded = sum(not pair_check(fp, MONO, p) for p in enumerate_H(fp.grid))
    assert padded >= raw


def test_pad_needs_upper_bound_infinity():
    from gridtester.structure import verify_counts

    f = FunctionTable.from_values(1, 3, [0, 1, 2])
    with pytest.raises(UsageError):
        verify_counts(f, PropertyParams.lipschitz(1), pad_first=True)
