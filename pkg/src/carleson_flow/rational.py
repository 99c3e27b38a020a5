"""Exact rational parsing and formatting."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def as_rational(x) -> Fraction:
    """Convert ``x`` to a Fraction without ever going through binary floats.

    Accepts ints, Fractions, and strings such as ``"3/4"``, ``"0.35"`` or ``"-2"``.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {x!r}") from exc
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def fmt(x: Fraction | int) -> str:
    """Format as ``"p/q"`` in lowest terms (``"2/1"`` for integers)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
