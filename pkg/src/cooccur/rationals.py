"""Parsing and rendering of exact rationals."""

import re
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

RATIONAL_PATTERN = re.compile(r"^-?\d+(/\d+)?$")


def is_rational_string(text: str) -> bool:
    """
    Check that text is an integer or "p/q" string with a nonzero denominator.

    Args:
        text: Candidate string

    Returns:
        True if text parses as an exact rational
    """
    if not isinstance(text, str) or not RATIONAL_PATTERN.match(text.strip()):
        return False
    if "/" in text:
        return int(text.split("/", 1)[1]) != 0
    return True


def parse_rational(value: str | int | Fraction) -> Fraction:
    """
    Convert a serialized rational to a Fraction.

    Floats are rejected; only integers and "p/q" strings are exact.

    Args:
        value: Integer, Fraction or rational string

    Returns:
        Parsed fraction

    Raises:
        ValueError: If value is not an exact rational
    """
    if isinstance(value, bool):
        raise ValueError(f"Not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and is_rational_string(value):
        return Fraction(value.strip())
    raise ValueError(f"Not a rational: {value!r}")


def format_rational(value: Fraction | int) -> str:
    """Render a rational as "p/q" or an integer string."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, digits: int) -> str:
    """
    Render a rational with a fixed number of decimal digits.

    Args:
        value: Exact value
        digits: Digits after the decimal point

    Returns:
        Rounded decimal string, half-even
    """
    if digits < 0:
        raise ValueError("digits must be non-negative")
    with localcontext() as ctx:
        ctx.prec = max(28, digits + len(str(abs(value.numerator))) + 4)
        exact = Decimal(value.numerator) / Decimal(value.denominator)
        quantum = Decimal(1).scaleb(-digits)
        return str(exact.quantize(quantum, rounding=ROUND_HALF_EVEN))
