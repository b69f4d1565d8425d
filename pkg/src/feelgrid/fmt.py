"""Numeric text formatting and grid rounding helpers."""

from __future__ import annotations

import math

from .temporal import TemporalValue

_EXACT_EPS = 1e-9


def round_half_away(v: float) -> int:
    """Round with halves away from zero (0.5 -> 1, -0.5 -> -1).

    Python's built-in round() is banker's rounding and must not be used for
    grid mapping; frames would differ across value parities.
    """
    if v >= 0:
        return math.floor(v + 0.5)
    return math.ceil(v - 0.5)


def format_number(v: float | int) -> tuple[str, bool]:
    """Render a number for speech/labels; returns (text, exact).

    Integers print as-is; integral floats keep one decimal ("2.0"); other
    values print at the fewest of 2 or 4 decimals that reproduces them
    within 1e-9. ``exact`` is False only when 4 decimals still lose
    precision, in which case callers may hedge the value.
    """
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v), True
    f = float(v)
    if math.isnan(f) or math.isinf(f):
        return str(f), False
    if f == int(f):
        return f"{f:.1f}", True
    if abs(f - round(f, 2)) < _EXACT_EPS:
        return f"{f:.2f}", True
    if abs(f - round(f, 4)) < _EXACT_EPS:
        return f"{f:.4f}", True
    return f"{f:.2f}", False


def format_value(v: object) -> str:
    """Best-effort display text for any table value."""
    if v is None:
        return "null"
    if isinstance(v, TemporalValue):
        return v.label
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return format_number(v)[0]
    return str(v)


def word_count(text: str) -> int:
    return len(text.split())
