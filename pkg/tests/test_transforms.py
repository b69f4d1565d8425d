from __future__ import annotations

import datetime as dt
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feelgrid.errors import NonTemporalGroupByError, UnknownColumnError
from feelgrid.table import table_from_records
from feelgrid.temporal import bucket, parse_temporal
from feelgrid.transforms import (
    Aggregate,
    Calculate,
    Filter,
    Jitter,
    apply_transforms,
    build_hierarchy,
    transform_output_schema,
)
from tests.conftest import FIXTURE_QUARTERS


def fixture_table():
    return table_from_records(
        [{"quarter": q, "interest": v} for q, v in FIXTURE_QUARTERS],
        types={"quarter": "temporal", "interest": "quantitative"},
    )


def daily_table(days=90, start=dt.date(2024, 4, 1), values=None):
    rows = []
    for i in range(days):
        day = start + dt.timedelta(days=i)
        value = values[i] if values else float(i)
        rows.append({"day": day.isoformat(), "value": value})
    return table_from_records(rows, types={"day": "temporal", "value": "quantitative"})


def test_empty_transform_list_is_identity():
    table = fixture_table()
    assert apply_transforms(table, []) is table


def test_filter_hand_checked():
    # hand-filtered: values above 1.0 are 1.6, 2.35, 3.1, 3.85
    table = apply_transforms(fixture_table(), [Filter("interest > 1.0")])
    assert table.column("interest") == [1.6, 2.35, 3.1, 3.85]


def test_calculate_adds_column_same_row_count():
    table = apply_transforms(
        fixture_table(), [Calculate(expression="interest * 100", output="bps")]
    )
    assert table.row_count == 13
    # spot checks by hand: 0.25*100, 0.1*100, 3.85*100
    bps = table.column("bps")
    assert bps[0] == 25.0
    assert bps[1] == pytest.approx(10.0)
    assert bps[-1] == pytest.approx(385.0)


def test_input_table_never_mutated():
    table = fixture_table()
    before = table.digest()
    apply_transforms(
        table,
        [
            Calculate(expression="interest * 2", output="x2"),
            Filter("interest > 1.0"),
            Jitter(field="interest", amplitude=0.5, seed=3),
            Aggregate(op="mean", field="interest", groupby=("quarter",), time_unit="year"),
        ],
    )
    assert table.digest() == before


def test_sequential_composition():
    table = fixture_table()
    xs = [Calculate(expression="interest * 100", output="bps")]
    ys = [Filter("bps > 100")]
    combined = apply_transforms(table, xs + ys)
    split = apply_transforms(apply_transforms(table, xs), ys)
    assert combined == split


def test_aggregate_unknown_column():
    with pytest.raises(UnknownColumnError):
        transform_output_schema(
            {"a": "quantitative"},
            Aggregate(op="mean", field="missing", groupby=("a",)),
        )


def test_jitter_requires_amplitude_and_seed_semantics():
    table = fixture_table()
    j1 = apply_transforms(table, [Jitter(field="interest", amplitude=0.5, seed=42)])
    j2 = apply_transforms(table, [Jitter(field="interest", amplitude=0.5, seed=42)])
    j3 = apply_transforms(table, [Jitter(field="interest", amplitude=0.5, seed=43)])
    assert j1 == j2  # same seed reproduces exactly
    assert j1 != j3
    assert apply_transforms(table, [Jitter(field="interest", amplitude=0.0, seed=1)]) == table


def test_hierarchy_90_days_bucket_counts():
    # oracle: bucket counts derived with datetime directly
    table = daily_table()
    days = [dt.date(2024, 4, 1) + dt.timedelta(days=i) for i in range(90)]
    month_count = len({(d.year, d.month) for d in days})
    week_count = len({d.isocalendar()[:2] for d in days})
    assert (month_count, week_count) == (3, 13)

    layers = build_hierarchy(table, ["month", "week", "day"], "mean", "value", "day")
    assert [layer.layer_id for layer in layers] == ["month", "week", "day"]
    assert [layer.point_count for layer in layers] == [3, 13, 90]


def test_hierarchy_single_row():
    table = daily_table(days=1)
    layers = build_hierarchy(table, ["month", "week", "day"], "mean", "value", "day")
    assert [layer.point_count for layer in layers] == [1, 1, 1]


def test_hierarchy_mean_matches_bucket_brute_force():
    rng = random.Random(11)
    values = [rng.uniform(0, 100) for _ in range(90)]
    table = daily_table(values=values)
    layers = build_hierarchy(table, ["week"], "mean", "value", "day")
    week_layer = layers[0].table
    # brute force: group values by ISO week with datetime only
    groups = {}
    for i in range(90):
        day = dt.date(2024, 4, 1) + dt.timedelta(days=i)
        iso = day.isocalendar()
        groups.setdefault(f"{iso.year}-W{iso.week:02d}", []).append(values[i])
    for label, members in groups.items():
        got = [
            row[1]
            for row in week_layer.rows
            if row[0].label == label
        ]
        assert len(got) == 1
        assert got[0] == pytest.approx(sum(members) / len(members), abs=1e-9)


def test_hierarchy_requires_temporal_groupby():
    table = table_from_records([{"a": 1, "b": 2}])
    with pytest.raises(NonTemporalGroupByError):
        build_hierarchy(table, ["day"], "mean", "b", "a")


def test_hierarchy_rejects_misordered_units():
    with pytest.raises(ValueError):
        build_hierarchy(daily_table(days=7), ["day", "week"], "mean", "value", "day")


def test_finest_layer_equals_grouped_base():
    table = daily_table(days=14)
    layers = build_hierarchy(table, ["week", "day"], "mean", "value", "day")
    day_layer = layers[-1].table
    assert day_layer.row_count == table.row_count
    assert [r[1] for r in day_layer.rows] == pytest.approx(
        [r[1] for r in table.rows]
    )


@settings(max_examples=30)
@given(
    days=st.integers(min_value=1, max_value=120),
    seed=st.integers(min_value=0, max_value=2**16),
    op=st.sampled_from(["sum", "count"]),
)
def test_sum_count_conserved_across_layers(days, seed, op):
    rng = random.Random(seed)
    values = [rng.uniform(-50, 50) for _ in range(days)]
    table = daily_table(days=days, values=values)
    layers = build_hierarchy(table, ["month", "week", "day"], op, "value", "day")
    totals = [sum(v for v in layer.table.column("value") if v is not None) for layer in layers]
    assert totals[0] == pytest.approx(totals[1], abs=1e-6)
    assert totals[1] == pytest.approx(totals[2], abs=1e-6)


def test_aggregate_excludes_nulls_and_counts_non_null():
    table = table_from_records(
        [
            {"day": "2024-04-01", "value": 1.0},
            {"day": "2024-04-02", "value": None},
            {"day": "2024-04-03", "value": 3.0},
        ],
        types={"day": "temporal", "value": "quantitative"},
    )
    agg_mean = apply_transforms(
        table, [Aggregate(op="mean", field="value", groupby=("day",), time_unit="month")]
    )
    assert agg_mean.column("value") == [2.0]
    agg_count = apply_transforms(
        table, [Aggregate(op="count", field="value", groupby=("day",), time_unit="month")]
    )
    assert agg_count.column("value") == [2]


def test_timeunit_buckets_labels():
    table = daily_table(days=40)
    agg = apply_transforms(
        table, [Aggregate(op="mean", field="value", groupby=("day",), time_unit="month")]
    )
    assert [row[0].label for row in agg.rows] == ["2024-04", "2024-05"]
    assert agg.rows[0][0] == bucket(parse_temporal("2024-04-15"), "month")
