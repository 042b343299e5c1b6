"""Exact-to-text rendering of rational values.

Statistics are held as `fractions.Fraction`; turning them into decimal text
is a report-layer concern. Rounding is round-half-even, computed on the
rational itself so no float ever enters the pipeline.
"""

from __future__ import annotations

from fractions import Fraction


def decimal_string(value: Fraction, places: int) -> str:
    """Fixed-point decimal text of an exact rational, round-half-even."""
    if places < 0:
        raise ValueError("places must be >= 0")
    sign = "-" if value < 0 else ""
    scaled = abs(value) * Fraction(10) ** places
    whole, remainder = divmod(scaled.numerator, scaled.denominator)
    doubled = 2 * remainder
    if doubled > scaled.denominator or (doubled == scaled.denominator and whole % 2 == 1):
        whole += 1
    digits = str(whole).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def percent_string(value: Fraction, places: int = 1) -> str:
    """Percentage text (no % sign) of an exact rational, round-half-even."""
    return decimal_string(value * 100, places)


def fraction_payload(value: Fraction, percent: bool = False) -> dict:
    """JSON-friendly view: exact integer pair plus a decimal rendering."""
    payload = {"numerator": value.numerator, "denominator": value.denominator}
    if percent:
        payload["percent"] = percent_string(value, 1)
    else:
        payload["value"] = decimal_string(value, 4)
    return payload
