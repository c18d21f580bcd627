"""Exact scalar arithmetic: rationals plus a single infinity.

All sequence data and threshold statistics are exact rationals
(``fractions.Fraction``); quantities that diverge are the singleton
``INF``.  Floats enter only at the matrix-construction boundary.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .errors import SchemaError

__all__ = ["INF", "Infinite", "ExtendedRational", "parse_rational", "format_rational"]


class Infinite:
    """Positive infinity for counts and sums.  A singleton: compare with ``is``."""

    _instance: "Infinite | None" = None

    def __new__(cls) -> "Infinite":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __bool__(self) -> bool:
        return True

    # Order: INF is greater than every rational and equal only to itself.
    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("findiag.INF")

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) or other is self:
            return other is not self
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) or other is self:
            return True
        return NotImplemented

    def __add__(self, other: object):
        if isinstance(other, (int, Fraction)) or other is self:
            return self
        return NotImplemented

    __radd__ = __add__

    def __reduce__(self):
        # Keeps the singleton property across pickling (process pools).
        return (Infinite, ())


INF = Infinite()

ExtendedRational = Union[Fraction, Infinite]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str, path: str = "$") -> Fraction:
    """Parse ``"p/q"`` or an integer literal into an exact Fraction.

    Decimal notation is rejected on purpose: 0.1 is not 1/10 in binary
    floating point, and silently accepting it would poison exact checks.
    """
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise SchemaError(f"expected rational 'p/q' or integer string, got {text!r}", path)
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise SchemaError(f"zero denominator in {text!r}", path) from None


def format_rational(x: Fraction) -> str:
    """Inverse of parse_rational; '3', '-1/2', etc."""
    return str(Fraction(x))
