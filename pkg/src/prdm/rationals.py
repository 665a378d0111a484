"""Exact rational parsing and rendering helpers.

Every quantity the mechanism touches (capacities, budgets, weights,
rewards) is a `fractions.Fraction`. Floats exist only at presentation
boundaries: decimal strings in JSON/CSV output are rendered from the
exact value, and numeric inputs are converted through their literal
decimal form, never through binary float arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

RationalLike = Union[Fraction, int, str, float, dict]


def parse_rational(value: RationalLike) -> Fraction:
    """Convert a JSON-ish value to an exact Fraction.

    Accepts integers, Fractions, strings ("3", "2.5", "1/3"),
    numerator/denominator mappings ({"num": ..., "den": ...}), and floats
    (converted via their repr so 2.5 means exactly 5/2).
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational from {value!r}") from exc
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, dict):
        try:
            num = int(str(value["num"]))
            den = int(str(value["den"]))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"cannot parse rational from {value!r}") from exc
        if den == 0:
            raise ValueError("zero denominator")
        return Fraction(num, den)
    raise ValueError(f"cannot parse rational from {value!r}")


def format_decimal(value: Fraction, places: int = 12) -> str:
    """Render a Fraction as a decimal string rounded to `places` digits.

    Rounding is exact (round-half-even on the scaled integer); trailing
    zeros and a trailing dot are stripped.
    """
    q = Fraction(value)
    scale = 10 ** places
    n = round(q * scale)  # Fraction.__round__ is exact
    if n == 0:
        return "0"
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), scale)
    if frac == 0:
        return f"{sign}{whole}"
    digits = str(frac).rjust(places, "0").rstrip("0")
    return f"{sign}{whole}.{digits}"


def rational_fields(value: Fraction, places: int = 12) -> dict:
    """JSON form of an exact value: numerator, denominator, decimal view."""
    q = Fraction(value)
    return {
        "num": str(q.numerator),
        "den": str(q.denominator),
        "decimal": format_decimal(q, places),
    }


def approx_sqrt(value: Fraction, digits: int = 30) -> Fraction:
    """Rational approximation of sqrt(value), good to `digits` decimals.

    Display-only helper; exact comparisons against square roots should be
    done by squaring both sides instead.
    """
    q = Fraction(value)
    if q < 0:
        raise ValueError("square root of a negative value")
    scale = 10 ** digits
    return Fraction(isqrt((q.numerator * scale * scale) // q.denominator), scale)
