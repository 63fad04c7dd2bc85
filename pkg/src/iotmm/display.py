"""Rounded display strings, matching the precision the published figures use.

Internal arithmetic never goes through these helpers; they only render.
"""

from __future__ import annotations

import decimal
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

_CTX = decimal.Context(prec=40)

RATIO_DIGITS = 2
PER_UNIT_CURRENCY_DIGITS = 3


def exact_decimal(x) -> Decimal:
    """Decimal rendering of an int, float, Fraction or Decimal (40 significant digits)."""
    if isinstance(x, Decimal):
        return x
    if isinstance(x, Fraction):
        return _CTX.divide(Decimal(x.numerator), Decimal(x.denominator))
    if isinstance(x, float):
        return Decimal(repr(x))
    return Decimal(x)


def _plain(d: Decimal, strip: bool) -> str:
    s = format(d, "f")
    if strip and "." in s:
        s = s.rstrip("0").rstrip(".")
    if s in ("-0", ""):
        s = "0"
    return s


def significant(x, digits: int, strip: bool = True) -> str:
    """Round to ``digits`` significant figures, fixed-point notation."""
    d = exact_decimal(x)
    if d.is_zero():
        return "0"
    quantum = Decimal(1).scaleb(d.adjusted() - digits + 1)
    return _plain(d.quantize(quantum, rounding=ROUND_HALF_UP, context=_CTX), strip)


def fixed(x, places: int) -> str:
    d = exact_decimal(x)
    return _plain(d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP, context=_CTX), False)


def ratio(x, digits: int = RATIO_DIGITS) -> str:
    return significant(x, digits)


def currency(x) -> str:
    """Whole amounts to the cent; sub-unit amounts (per-device prices) to 3 s.f."""
    d = exact_decimal(x)
    if d.is_zero() or abs(d) >= 1:
        return fixed(d, 2)
    return significant(d, PER_UNIT_CURRENCY_DIGITS)


def probability(x) -> str:
    return significant(x, 12)


def count(x) -> str:
    return str(int(x))
