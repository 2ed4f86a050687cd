"""Exact rational helpers shared across the package.

Every quantity that crosses the public API (transit times, capacities,
supplies, horizons, flow amounts, polytope coordinates) is a
fractions.Fraction. Floats are rejected at the boundary: tie detection in
the geometry would silently break under rounding.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def parse_rational(value) -> Fraction:
    """Accept int, Fraction, or an exact string like "7", "9/2", "4.5"."""
    if isinstance(value, bool):
        raise ValueError("not a number: %r" % (value,))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError("cannot parse rational from %r" % (value,)) from exc
    if isinstance(value, float):
        raise ValueError(
            "refusing inexact float %r; pass a string like '9/2' or '4.5'" % (value,)
        )
    raise ValueError("cannot parse rational from %r" % (value,))


def format_rational(x) -> str:
    """Reduced "p/q"; integers render without the "/1"."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def json_rational(x):
    """JSON form: plain int when integral, else the reduced "p/q" string."""
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return format_rational(x)


def rational_gcd(*values) -> Fraction:
    """Largest rational dividing every value an integer number of times.

    Zero arguments are skipped; with no nonzero input the result is 0.
    """
    g = Fraction(0)
    for v in values:
        v = abs(Fraction(v))
        if v == 0:
            continue
        if g == 0:
            g = v
        else:
            g = Fraction(
                gcd(g.numerator * v.denominator, v.numerator * g.denominator),
                g.denominator * v.denominator,
            )
    return g
