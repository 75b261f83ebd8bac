import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from gridtester.errors import UsageError
from gridtester.grid import GridPair, Hypergrid, enumerate_H, size_of_H
from gridtester.properties import PropertyParams, is_violation
from gridtester.table import FunctionTable
from gridtester.tester import (
    TesterConfig,
    Verdict,
    count_violated_pairs,
    decode_pair,
    make_rng,
    query_budget,
    query_plan,
    run_tester,
    sample_pair,
    single_trial_bound,
    violated_fraction,
)

MONO = PropertyParams.monotone()
LIP = PropertyParams.lipschitz(1)


def test_budget_values():
    # p = (1/2) / (4 * 2 * 3) = 1/48, so q = ceil(48 ln 3) = 53
    assert single_trial_bound(2, 4, Fraction(1, 2)) == Fraction(1, 48)
    assert query_budget(2, 4, Fraction(1, 2)) == 53
    assert query_budget(3, 2, Fraction(1, 3), hypercube_mode=True) == 20


@pytest.mark.parametrize("n, k, hyper", [(1, 4, False), (2, 8, False), (3, 2, True), (4, 2, True), (2, 5, False)])
def test_budget_is_smallest_integer_past_ln3_over_p(n, k, hyper):
    for eps in (Fraction(1, 2), Fraction(1, 5), Fraction(1, 17)):
        p = single_trial_bound(n, k, eps, hyper)
        q = query_budget(n, k, eps, hyper)
        assert q * float(p) >= math.log(3) > (q - 1) * float(p)
        assert (1 - float(p)) ** q <= 1 / 3


def test_budget_nonincreasing_in_epsilon():
    budgets = [query_budget(2, 8, Fraction(i, 20)) for i in range(1, 20)]
    assert budgets == sorted(budgets, reverse=True)


def test_budget_input_validation():
    with pytest.raises(UsageError):
        query_budget(2, 4, 1)
    with pytest.raises(UsageError):
        query_budget(2, 4, Fraction(1, 2), hypercube_mode=True)
    with pytest.raises(UsageError):
        TesterConfig(Fraction(0))


@pytest.mark.parametrize("n, k", [(1, 4), (2, 3), (2, 4), (3, 2), (2, 8)])
def test_decode_pair_follows_enumeration_order(n, k):
    g = Hypergrid(n, k)
    assert [decode_pair(g, i) for i in range(size_of_H(g))] == list(enumerate_H(g))


def test_sampler_on_a_single_pair():
    g = Hypergrid(1, 2)
    rng = make_rng(0)
    assert {sample_pair(g, rng) for _ in range(50)} == {GridPair((1,), (2,))}


def test_sampler_is_uniform_on_the_line():
    g = Hypergrid(1, 4)
    draws = 100_000
    counts = Counter(decode_pair(g, int(i)) for i in make_rng(11).integers(0, 5, draws))
    sigma = math.sqrt(draws * (1 / 5) * (4 / 5))
    assert len(counts) == 5
    for c in counts.values():
        assert abs(c - draws / 5) <= 3 * sigma


def test_sampler_axis_marginal_on_the_square():
    g = Hypergrid(2, 2)
    plan = query_plan(g, 5, 20_000)
    axis1 = sum(p.lo[0] != p.hi[0] for p in plan)
    assert abs(axis1 - 10_000) <= 3 * math.sqrt(20_000 / 4)


def test_query_plan_is_seeded():
    g = Hypergrid(2, 4)
    assert query_plan(g, 9, 30) == query_plan(g, 9, 30)
    assert query_plan(g, 9, 30) != query_plan(g, 10, 30)


def test_satisfying_functions_are_always_accepted():
    f = FunctionTable.from_function(Hypergrid(2, 4), lambda x: x[0] + 2 * x[1])
    for seed in range(20):
        report = run_tester(f, MONO, TesterConfig(Fraction(1, 10), seed))
        assert report.verdict is Verdict.ACCEPT
        assert report.queries_used == report.budget and report.witness is None
    lip = FunctionTable.from_function(Hypergrid(2, 4), lambda x: x[0] - x[1])
    assert not run_tester(lip, LIP, TesterConfig(Fraction(1, 10), 1)).rejected


def test_reject_with_witness_on_two_points():
    f = FunctionTable.from_values(1, 2, [1, 0])
    report = run_tester(f, MONO, TesterConfig(Fraction(1, 2), 0, query_override=1))
    assert report.rejected and report.queries_used == 1
    assert report.witness == GridPair((1,), (2,))
    assert str(report.verdict) == "reject"


def test_witness_is_a_real_violation():
    rng = np.random.default_rng(0)
    for seed in range(30):
        f = FunctionTable.from_values(2, 4, [int(v) for v in rng.integers(0, 4, 16)])
        report = run_tester(f, MONO, TesterConfig(Fraction(1, 4), seed))
        if report.rejected:
            assert is_violation(f, MONO, *report.witness)


def test_counting_examples():
    mono = FunctionTable.from_function(Hypergrid(2, 4), lambda x: sum(x))
    counts, total = count_violated_pairs(mono, MONO)
    assert total == 0 and set(counts.values()) == {0}
    anti = FunctionTable.from_function(Hypergrid(2, 2), lambda x: -sum(x))
    counts, total = count_violated_pairs(anti, MONO)
    assert total == 4 == sum(counts.values())
    assert violated_fraction(anti, MONO) == 1
