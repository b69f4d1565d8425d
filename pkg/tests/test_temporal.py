from __future__ import annotations

import datetime as dt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from feelgrid.errors import TypeCoercionError
from feelgrid.temporal import TemporalValue, bucket, parse_temporal


def test_quarter_parses_to_period_start():
    v = parse_temporal("2020-Q2")
    assert v.kind == "quarter"
    assert v.label == "2020-Q2"
    assert v.date() == dt.date(2020, 4, 1)


def test_quarters_order_by_year_then_index():
    quarters = ["2020-Q4", "2021-Q1", "2020-Q2", "2021-Q3"]
    ordered = sorted(parse_temporal(q) for q in quarters)
    assert [v.label for v in ordered] == ["2020-Q2", "2020-Q4", "2021-Q1", "2021-Q3"]


def test_invalid_quarter_index_rejected():
    with pytest.raises(TypeCoercionError):
        parse_temporal("2020-Q5")
    with pytest.raises(TypeCoercionError):
        parse_temporal("2020-Q0")


def test_non_temporal_text_rejected():
    with pytest.raises(TypeCoercionError):
        parse_temporal("not a date")


def test_iso_date_round_trips_label():
    v = parse_temporal("2024-02-29")
    assert v.label == "2024-02-29"
    assert v.kind == "date"


def test_spoken_and_short_forms():
    v = parse_temporal("2020-Q2")
    assert v.spoken() == "2020 Quarter 2"
    assert v.short() == "Q2 2020"
    d = parse_temporal("2024-04-01")
    assert d.spoken() == "2024-04-01"


@given(st.dates(min_value=dt.date(1990, 1, 1), max_value=dt.date(2100, 12, 31)))
def test_week_bucket_is_iso_week_monday(day):
    v = parse_temporal(day.isoformat())
    b = bucket(v, "week")
    monday = dt.date.fromordinal(b.ordinal)
    assert monday.isoweekday() == 1
    assert monday <= day
    assert (day - monday).days < 7
    iso = day.isocalendar()
    assert b.label == f"{iso.year}-W{iso.week:02d}"


@given(st.dates(min_value=dt.date(1990, 1, 1), max_value=dt.date(2100, 12, 31)))
def test_calendar_buckets_contain_their_day(day):
    v = parse_temporal(day.isoformat())
    assert bucket(v, "day").ordinal == v.ordinal
    # calendar-aligned buckets start at or before the day they contain
    for unit in ("year", "quarter", "month"):
        start = dt.date.fromordinal(bucket(v, unit).ordinal)
        assert start <= day
        assert start.day == 1


def test_quarter_bucket_labels():
    assert bucket(parse_temporal("2024-05-17"), "quarter").label == "2024-Q2"
    assert bucket(parse_temporal("2024-05-17"), "month").label == "2024-05"
    assert bucket(parse_temporal("2024-05-17"), "year").label == "2024"
