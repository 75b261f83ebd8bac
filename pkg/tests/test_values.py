from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridtester.errors import UndefinedArithmetic, UsageError
from gridtester.values import INF, NEG_INF, DualValue, format_value, normalize, parse_number, parse_value

rationals = st.fractions(max_denominator=50).map(normalize)
ext_values = st.one_of(rationals, st.sampled_from([INF, NEG_INF]))


def test_total_order_puts_infinities_at_the_ends():
    assert NEG_INF < -(10**9) < Fraction(1, 3) < 10**9 < INF
    assert not INF < INF
    assert INF == INF and NEG_INF != INF


def test_opposite_infinities_do_not_add():
    with pytest.raises(UndefinedArithmetic):
        INF + NEG_INF
    with pytest.raises(UndefinedArithmetic):
        NEG_INF - NEG_INF


def test_zero_times_infinity_is_zero():
    assert 0 * INF == 0
    assert INF * 0 == 0
    assert 3 * NEG_INF is NEG_INF
    assert -2 * INF is NEG_INF


def test_infinity_absorbs_finite_values():
    assert INF + Fraction(7, 2) is INF
    assert 5 - INF is NEG_INF
    assert -NEG_INF is INF


@pytest.mark.parametrize(
    "text, value",
    [("3", 3), ("-3", -3), ("2/4", Fraction(1, 2)), ("+inf", INF), ("-inf", NEG_INF), ("4/2", 2)],
)
def test_parse_value(text, value):
    assert parse_value(text) == value


@pytest.mark.parametrize("text", ["0.5", "1/0", "abc", "", "1e3", "inf/2"])
def test_parse_value_rejects(text):
    with pytest.raises(UsageError):
        parse_value(text)


def test_parse_number_accepts_decimals_exactly():
    assert parse_number("0.1") == Fraction(1, 10)
    assert parse_number("1/3") == Fraction(1, 3)
    with pytest.raises(UsageError):
        parse_number("x")


@given(ext_values)
def test_format_then_parse_is_identity(v):
    assert parse_value(format_value(v)) == v


def test_dual_values_compare_real_part_first():
    assert DualValue(1, -5) > DualValue(0, 9)
    assert DualValue(1, -1) < DualValue(1, 0) == 1
    assert DualValue(INF, -3) > 10**6


@given(rationals, rationals, rationals, rationals)
def test_dual_arithmetic_is_componentwise(a, b, c, d):
    s = DualValue(a, b) + DualValue(c, d)
    assert (s.real, s.eps) == (a + c, b + d)
    t = DualValue(a, b) - DualValue(c, d)
    assert (t.real, t.eps) == (a - c, b - d)


def test_dual_string_form():
    assert str(DualValue(1, Fraction(-2))) == "1-2eps"
    assert str(DualValue(Fraction(1, 2))) == "1/2"
