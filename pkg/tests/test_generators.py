from fractions import Fraction

import pytest

from gridtester.errors import UsageError
from gridtester.generators import KINDS, generate, increment_lattice
from gridtester.properties import PropertyParams, check_property
from gridtester.values import INF, NEG_INF

PARAMS = [PropertyParams.monotone(), PropertyParams.lipschitz(1), PropertyParams(Fraction(1, 2), 2), PropertyParams(-3, -1)]


@pytest.mark.parametrize("params", PARAMS, ids=str)
@pytest.mark.parametrize("shape", [(1, 5), (2, 3), (3, 2), (2, 4)])
def test_satisfying_tables_satisfy(params, shape):
    for seed in range(15):
        f = generate("satisfying", *shape, seed, params)
        assert check_property(f, params) is None


def test_lattice_stays_inside_the_window():
    for params in PARAMS + [PropertyParams(NEG_INF, 0), PropertyParams(NEG_INF, INF)]:
        for step in increment_lattice(params):
            assert params.alpha <= step <= params.beta


def test_anti_monotone_line():
    f = generate("anti-monotone", 1, 2, 0)
    assert f.values == (-1, -2)


def test_rho_zero_keeps_the_satisfying_table():
    mono = PropertyParams.monotone()
    for seed in range(5):
        assert generate("corrupted-monotone", 2, 3, seed, mono, rho=0) == generate("satisfying", 2, 3, seed, mono)


def test_generators_are_seeded():
    for kind in KINDS:
        assert generate(kind, 2, 3, 4) == generate(kind, 2, 3, 4)
    assert generate("uniform-random", 2, 3, 4) != generate("uniform-random", 2, 3, 5)


def test_spikes_move_the_chosen_points():
    lip = PropertyParams.lipschitz(1)
    base = generate("satisfying", 2, 4, 1, lip)
    spiked = generate("lipschitz-spikes", 2, 4, 1, lip, spikes=3)
    changed = base.differing_points(spiked)
    assert len(changed) == 3
    assert all(abs(spiked[p] - base[p]) == 2 for p in changed)


def test_uniform_alphabet():
    f = generate("uniform-random", 2, 4, 0, alphabet=2)
    assert set(f.values) <= {0, 1}


@pytest.mark.parametrize(
    "kind, knobs",
    [("nope", {}), ("uniform-random", {"colour": 1}), ("anti-monotone", {"rho": 0}), ("corrupted-monotone", {"rho": 2})],
)
def test_bad_generator_requests(kind, knobs):
    with pytest.raises(UsageError):
        generate(kind, 2, 2, 0, **knobs)
