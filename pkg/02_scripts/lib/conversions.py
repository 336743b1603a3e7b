"""
Angle literal parsing and number formatting for emitted documents.
"""
from __future__ import annotations

import math
import re
from decimal import Decimal
from typing import Optional, Tuple

import numpy as np


# =============================================================================
# ANGLES
# =============================================================================

# Accepts 'pi', 'pi/6', '3pi/4', '3*pi/4', '0.5*pi', '-pi/2'
_PI_LITERAL = re.compile(
    r'^\s*(?P<sign>[-+]?)\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)\s*\*?\s*)?pi'
    r'\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$',
    re.IGNORECASE,
)


def parse_angle(text: str | float) -> float:
    """
    Parse an angle in radians, allowing `pi` fraction literals.

    Args:
        text: A float, a numeric string, or a literal such as 'pi/6'

    Returns:
        Angle in radians

    Raises:
        ValueError: If the literal cannot be parsed
    """
    if isinstance(text, (int, float)):
        return float(text)

    m = _PI_LITERAL.match(text)
    if m:
        num = float(m.group('num')) if m.group('num') else 1.0
        den = float(m.group('den')) if m.group('den') else 1.0
        if den == 0:
            raise ValueError(f"Angle literal divides by zero: '{text}'")
        value = math.pi * num / den
        return -value if m.group('sign') == '-' else value

    try:
        return float(text)
    except ValueError:
        raise ValueError(f"Unrecognized angle literal: '{text}' (use e.g. 0.5, pi/6, 3*pi/4)")


def format_angle(value: float) -> str:
    """Render an angle as a `pi` fraction when it is one with a small denominator."""
    ratio = value / math.pi
    for den in (1, 2, 3, 4, 6, 8, 12, 16, 32, 64):
        num = round(ratio * den)
        if abs(ratio * den - num) < 1e-12:
            if num == 0:
                return '0'
            head = 'pi' if num == 1 else f'{num}*pi'
            return head if den == 1 else f'{head}/{den}'
    return repr(value)


def angle_grid(start: float, stop: float, steps: int) -> np.ndarray:
    """Evenly spaced angles with exact endpoints."""
    if steps < 2:
        raise ValueError(f"Grid needs at least 2 steps, got {steps}")
    grid = np.linspace(start, stop, steps)
    grid[0], grid[-1] = start, stop
    return grid


# =============================================================================
# NUMBERS
# =============================================================================

SIGNIFICANT_DIGITS = 9
LN2 = math.log(2.0)


def round_sig(value: Optional[float], digits: int = SIGNIFICANT_DIGITS) -> Optional[float]:
    """
    Round to a number of significant digits for emission.

    Returns:
        Rounded float, or None if input is None. Negative zero becomes 0.0.
    """
    if value is None:
        return None
    value = float(value)
    if not math.isfinite(value):
        return value
    rounded = float(f'{value:.{digits}g}')
    return 0.0 if rounded == 0 else rounded


def nats_to_bits(value: float) -> float:
    """Convert an entropy in nats to bits."""
    return value / LN2


def _decimal_to_float(value: Decimal) -> float:
    out = float(value)
    return 0.0 if out == 0 else out


def round_difference(minuend: Optional[float], subtrahend: Optional[float],
                     digits: int = SIGNIFICANT_DIGITS
                     ) -> Tuple[Optional[float], Optional[float], Optional[float]]:
    """
    Round two values on a shared decimal quantum and take their difference.

    The quantum keeps `digits` significant digits of the larger magnitude,
    so the smaller value and the difference carry at most that many and the
    difference is exact on the decimal representations.

    Returns:
        (minuend, subtrahend, minuend - subtrahend); all None if either is None
    """
    if minuend is None or subtrahend is None:
        return round_sig(minuend), round_sig(subtrahend), None
    a, b = Decimal(repr(float(minuend))), Decimal(repr(float(subtrahend)))
    top = max(abs(a), abs(b))
    if top == 0:
        return 0.0, 0.0, 0.0
    quantum = Decimal(1).scaleb(top.adjusted() - (digits - 1))
    a, b = a.quantize(quantum), b.quantize(quantum)
    return _decimal_to_float(a), _decimal_to_float(b), _decimal_to_float(a - b)
