"""Temporal values: ISO-8601 dates and YYYY-Qn quarter literals.

Every temporal value carries its original label plus a day ordinal (the
proleptic Gregorian ordinal of the period's first day), so values of any
grain order consistently and render back to their source text.
"""

from __future__ import annotations

import datetime as _dt
import re
from dataclasses import dataclass

from .errors import TypeCoercionError

# Coarse to fine; the order deciding which resolution layer is "finer".
TIME_UNITS = ("year", "quarter", "month", "week", "day")

_QUARTER_RE = re.compile(r"^(\d{4})-Q(\d+)$")


@dataclass(frozen=True, slots=True)
class TemporalValue:
    """One temporal datum; ordered by day ordinal, then label."""

    label: str
    ordinal: int
    kind: str  # "date", "quarter", "week", "month", "year"

    def __lt__(self, other: "TemporalValue") -> bool:
        return (self.ordinal, self.label) < (other.ordinal, other.label)

    def __le__(self, other: "TemporalValue") -> bool:
        return (self.ordinal, self.label) <= (other.ordinal, other.label)

    def date(self) -> _dt.date:
        return _dt.date.fromordinal(self.ordinal)

    def spoken(self) -> str:
        """Long spoken form: quarters read as '2020 Quarter 2'."""
        if self.kind == "quarter":
            year, q = self._year_quarter()
            return f"{year} Quarter {q}"
        return self.label

    def short(self) -> str:
        """Compact form used in generated answers: 'Q2 2020'."""
        if self.kind == "quarter":
            year, q = self._year_quarter()
            return f"Q{q} {year}"
        return self.label

    def _year_quarter(self) -> tuple[int, int]:
        m = _QUARTER_RE.match(self.label)
        if m:
            return int(m.group(1)), int(m.group(2))
        d = self.date()
        return d.year, (d.month - 1) // 3 + 1


def parse_temporal(text: str) -> TemporalValue:
    """Parse an ISO date or quarter literal.

    Raises TypeCoercionError for anything else, including quarter indexes
    outside 1..4 (for example '2020-Q5').
    """
    text = text.strip()
    m = _QUARTER_RE.match(text)
    if m:
        year, q = int(m.group(1)), int(m.group(2))
        if not 1 <= q <= 4:
            raise TypeCoercionError(f"invalid quarter index in {text!r}")
        start = _dt.date(year, 3 * (q - 1) + 1, 1)
        return TemporalValue(label=text, ordinal=start.toordinal(), kind="quarter")
    try:
        d = _dt.date.fromisoformat(text)
    except ValueError as exc:
        raise TypeCoercionError(f"not a date or quarter literal: {text!r}") from exc
    return TemporalValue(label=text, ordinal=d.toordinal(), kind="date")


def is_temporal_literal(text: str) -> bool:
    try:
        parse_temporal(text)
        return True
    except TypeCoercionError:
        return False


def bucket(value: TemporalValue, unit: str) -> TemporalValue:
    """Map a temporal value to its calendar-aligned bucket for ``unit``.

    Weeks are ISO weeks (Monday start); months, quarters and years are
    calendar-aligned. The bucket's ordinal is its first day.
    """
    d = value.date()
    if unit == "day":
        return TemporalValue(label=d.isoformat(), ordinal=d.toordinal(), kind="date")
    if unit == "week":
        iso = d.isocalendar()
        monday = d - _dt.timedelta(days=d.isoweekday() - 1)
        return TemporalValue(
            label=f"{iso.year}-W{iso.week:02d}", ordinal=monday.toordinal(), kind="week"
        )
    if unit == "month":
        first = d.replace(day=1)
        return TemporalValue(label=f"{d.year}-{d.month:02d}", ordinal=first.toordinal(), kind="month")
    if unit == "quarter":
        q = (d.month - 1) // 3 + 1
        first = _dt.date(d.year, 3 * (q - 1) + 1, 1)
        return TemporalValue(label=f"{d.year}-Q{q}", ordinal=first.toordinal(), kind="quarter")
    if unit == "year":
        first = _dt.date(d.year, 1, 1)
        return TemporalValue(label=str(d.year), ordinal=first.toordinal(), kind="year")
    raise ValueError(f"unknown time unit {unit!r}")


def unit_noun(values: list[TemporalValue]) -> str:
    """Plural noun for the grain of a temporal series, for generated text."""
    kinds = {v.kind for v in values}
    if kinds == {"quarter"}:
        return "quarters"
    if kinds == {"week"}:
        return "weeks"
    if kinds == {"month"}:
        return "months"
    if kinds == {"year"}:
        return "years"
    if kinds == {"date"}:
        return "days"
    return "points"
