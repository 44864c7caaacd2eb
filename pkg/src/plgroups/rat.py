"""Exact rational scalars.

``Rat`` is :class:`gmpy2.mpq` when gmpy2 is importable and
:class:`fractions.Fraction` otherwise. Both keep values in lowest terms with a
positive denominator, compare by value and hash identically, so callers never
need to know which one is active.
"""

import re
from fractions import Fraction

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rat = Fraction

_RAT_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


class RationalSyntaxError(ValueError):
    pass


def as_rat(value):
    """Coerce an int, Fraction, mpq or "p/q" string to ``Rat``."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or a 'p/q' string")
    if isinstance(value, Fraction):
        return Rat(value.numerator, value.denominator)
    return Rat(value)


def parse_rat(text):
    m = _RAT_RE.match(text)
    if not m:
        raise RationalSyntaxError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise RationalSyntaxError(f"zero denominator: {text!r}")
    return Rat(num, den)


def format_rat(value):
    """Render as "p/q" in lowest terms, or "p" when the denominator is 1."""
    value = as_rat(value)
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def to_fraction(value):
    value = as_rat(value)
    return Fraction(int(value.numerator), int(value.denominator))
