"""Parsing and rendering of exact numbers.

Nothing here ever goes through :class:`float`.

"""

from __future__ import annotations

import re
from decimal import Decimal, localcontext
from fractions import Fraction

from public import public

from .typehints import ExactRational

_POWER = re.compile(r"^\s*2\s*\^\s*(?P<exponent>[+-]?\d+)\s*$")
_RATIO = re.compile(r"^\s*(?P<num>[+-]?\d+)\s*(?:/\s*(?P<den>\d+)\s*)?$")


@public
def parse_rational(text: str) -> ExactRational:
    """Parse ``a/b``, ``a`` or ``2^N`` into an exact rational.

    Examples
    --------
    >>> parse_rational("2^-50")
    Fraction(1, 1125899906842624)
    >>> parse_rational("3/6")
    Fraction(1, 2)
    >>> parse_rational("1")
    Fraction(1, 1)

    Raises
    ------
    ValueError
        If `text` is none of the accepted forms or has a zero denominator.

    """
    match = _POWER.match(text)
    if match is not None:
        return Fraction(2) ** int(match.group("exponent"))
    match = _RATIO.match(text)
    if match is None:
        raise ValueError(f"not an exact rational: {text!r}")
    den = int(match.group("den") or 1)
    if not den:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(match.group("num")), den)


@public
def format_rational(value: ExactRational) -> str:
    """Render `value` as ``a/b``, or ``a`` when it is an integer.

    Examples
    --------
    >>> format_rational(Fraction(16, 30))
    '8/15'
    >>> format_rational(Fraction(1))
    '1'

    """
    return str(Fraction(value))


@public
def format_power(value: int) -> str:
    """Render `value` relative to a nearby power of two when that is shorter.

    Exact powers and their predecessors are always written as ``2^N`` and
    ``2^N-1``. Other integers of more than 64 bits are written as the nearest
    power of two plus or minus an offset, the rest in decimal.

    Examples
    --------
    >>> format_power(2 ** 61)
    '2^61'
    >>> format_power(2 ** 60 - 1)
    '2^60-1'
    >>> format_power(12)
    '12'
    >>> format_power(2 ** 100 - 2)
    '2^100-2'
    >>> format_power(2 ** 100 + 7)
    '2^100+7'

    """
    if value > 1 and not value & (value - 1):
        return f"2^{value.bit_length() - 1:d}"
    if value > 2 and not value & (value + 1):
        return f"2^{value.bit_length():d}-1"
    if value.bit_length() <= 64:
        return str(value)
    exponent = value.bit_length()
    below = value - (1 << (exponent - 1))
    above = (1 << exponent) - value
    if below <= above:
        return f"2^{exponent - 1:d}+{below:d}"
    return f"2^{exponent:d}-{above:d}"


@public
def format_significant(value: ExactRational, digits: int = 12) -> str:
    """Render `value` in fixed-point notation with `digits` significant digits.

    The value is correctly rounded (half-even) from the exact rational.

    Examples
    --------
    >>> format_significant(Fraction(1, 2))
    '0.500000000000'
    >>> format_significant(Fraction(1))
    '1.00000000000'
    >>> format_significant(Fraction(1, 3), digits=3)
    '0.333'
    >>> format_significant(Fraction(0))
    '0'

    """
    value = Fraction(value)
    if not value:
        return "0"
    with localcontext() as context:
        context.prec = digits
        rounded = Decimal(value.numerator) / Decimal(value.denominator)
        places = max(digits - rounded.adjusted() - 1, 0)
        return f"{rounded:.{places:d}f}"
