"""Exact-number helpers shared across the package.

Rational values travel through the public interfaces as strings of the form
"num/den" (or "num" for integers); these helpers centralize parsing,
formatting, rounding conventions, and JSON preparation.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from math import floor
from numbers import Rational


def parse_rational(value) -> Fraction:
    """Parse "num/den", "num", an int, or a decimal string into a Fraction.

    Floats are accepted for convenience and go through their shortest decimal
    representation, so 0.1 parses as 1/10 rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def nearest_integer(q) -> int:
    """Nearest integer to q, with exact half-integer ties resolved toward 0."""
    q = Fraction(q)
    if q < 0:
        return -nearest_integer(-q)
    base = floor(q)
    return base + 1 if q - base > Fraction(1, 2) else base


def is_exact(value) -> bool:
    """True for values that support exact arithmetic (ints and Fractions)."""
    return isinstance(value, Rational)


def to_jsonable(obj):
    """Recursively convert Fractions, tuples, and dataclasses for json.dumps."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (int, float, str)):
        return obj
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_json_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return str(obj)


def _json_key(key) -> str:
    if isinstance(key, str):
        return key
    if isinstance(key, (int, Fraction)):
        return format_rational(Fraction(key))
    if isinstance(key, tuple):
        return ",".join(_json_key(k) for k in key)
    return str(key)
