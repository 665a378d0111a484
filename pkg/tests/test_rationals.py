import decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prdm.rationals import approx_sqrt, format_decimal, parse_rational, rational_fields


def test_parse_accepts_all_documented_forms():
    assert parse_rational(3) == 3
    assert parse_rational("3") == 3
    assert parse_rational("2.5") == Fraction(5, 2)
    assert parse_rational(" 1/3 ") == Fraction(1, 3)
    assert parse_rational({"num": 7, "den": 2}) == Fraction(7, 2)
    assert parse_rational({"num": "7", "den": "2"}) == Fraction(7, 2)
    assert parse_rational(Fraction(9, 4)) == Fraction(9, 4)
    # floats go through their repr, so 2.5 is exactly 5/2
    assert parse_rational(2.5) == Fraction(5, 2)


@pytest.mark.parametrize(
    "bad", [True, "abc", "1/0", {"num": 1, "den": 0}, {"num": 1}, [1, 2], None]
)
def test_parse_rejects_junk(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_decimal_basics():
    assert format_decimal(Fraction(0)) == "0"
    assert format_decimal(Fraction(5)) == "5"
    assert format_decimal(Fraction(5, 2)) == "2.5"
    assert format_decimal(Fraction(-5, 2)) == "-2.5"
    assert format_decimal(Fraction(1, 3), 6) == "0.333333"
    assert format_decimal(Fraction(2, 3), 6) == "0.666667"
    # round-half-even on the last digit
    assert format_decimal(Fraction(25, 1000), 2) == "0.02"
    assert format_decimal(Fraction(35, 1000), 2) == "0.04"
    # tiny negatives that round to zero must not print "-0"
    assert format_decimal(Fraction(-1, 10**15)) == "0"


@settings(deadline=None, max_examples=300)
@given(num=st.integers(-10**12, 10**12), den=st.integers(1, 10**9))
def test_format_decimal_matches_decimal_module(num, den):
    q = Fraction(num, den)
    got = format_decimal(q, 12)
    ctx = decimal.Context(prec=60)
    expected = (
        ctx.divide(decimal.Decimal(num), decimal.Decimal(den))
        .quantize(decimal.Decimal("1e-12"), rounding=decimal.ROUND_HALF_EVEN)
        .normalize()
    )
    assert Fraction(got) == Fraction(expected)
    # no trailing zeros, no exponent notation
    assert "e" not in got and "E" not in got
    if "." in got:
        assert not got.endswith("0") and not got.endswith(".")


@settings(deadline=None, max_examples=200)
@given(num=st.integers(-10**9, 10**9), den=st.integers(1, 10**6))
def test_format_parse_round_trip_is_close(num, den):
    q = Fraction(num, den)
    back = parse_rational(format_decimal(q, 12))
    assert abs(back - q) <= Fraction(1, 10**12)


def test_rational_fields_are_lossless():
    fields = rational_fields(Fraction(-7, 3))
    assert fields["num"] == "-7" and fields["den"] == "3"
    assert Fraction(int(fields["num"]), int(fields["den"])) == Fraction(-7, 3)
    assert parse_rational(fields) == Fraction(-7, 3)


@settings(deadline=None, max_examples=100)
@given(num=st.integers(0, 10**8), den=st.integers(1, 10**4))
def test_approx_sqrt_bracket(num, den):
    q = Fraction(num, den)
    s = approx_sqrt(q)
    ulp = Fraction(1, 10**30)
    assert s * s <= q < (s + ulp) * (s + ulp)


def test_approx_sqrt_rejects_negative():
    with pytest.raises(ValueError):
        approx_sqrt(Fraction(-1))
