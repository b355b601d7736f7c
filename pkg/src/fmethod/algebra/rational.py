"""Exact rationals.

``fractions.Fraction`` already keeps numerator and denominator reduced with a
positive denominator over Python's arbitrary precision integers, so it is the
rational type of the whole package. This module only adds the string format
used in every JSON artifact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from ..errors import ParseError

BigRat = Fraction


def to_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rat(q: Fraction) -> str:
    """Always ``"p/q"``, including integers (``"4/1"``)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(text: str) -> Fraction:
    s = text.strip()
    try:
        if "/" in s:
            p, q = s.split("/", 1)
            if not q.strip():
                raise ValueError
            return Fraction(int(p), int(q))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational literal: {text!r}") from None


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0


def rat_str(q: Fraction) -> str:
    """Compact human form: ``3`` or ``-1/2``."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
