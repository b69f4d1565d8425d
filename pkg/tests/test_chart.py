from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from feelgrid.chart import load_chart, parse_spec, serialize_spec
from feelgrid.errors import (
    MissingFieldError,
    SchemaMismatchError,
    SpecSyntaxError,
    UnsupportedMarkError,
)

MINIMAL = {
    "name": "mini",
    "mark": "line",
    "encoding": {
        "x": {"field": "quarter", "type": "temporal"},
        "y": {"field": "interest", "type": "quantitative"},
    },
    "data": {"values": [{"quarter": "2020-Q2", "interest": 0.25}]},
}


def spec_bytes(obj) -> bytes:
    return json.dumps(obj).encode("utf-8")


def test_minimal_line_spec_parses():
    spec = parse_spec(spec_bytes(MINIMAL))
    assert spec.mark == "line"
    assert spec.x.field == "quarter" and spec.x.type == "temporal"
    assert spec.y.field == "interest" and spec.y.type == "quantitative"
    assert spec.series is None


def test_unsupported_mark_is_hard_error():
    bad = dict(MINIMAL, mark="arc")
    with pytest.raises(UnsupportedMarkError):
        parse_spec(spec_bytes(bad))


def test_missing_y_channel():
    bad = dict(MINIMAL, encoding={"x": MINIMAL["encoding"]["x"]})
    with pytest.raises(MissingFieldError):
        parse_spec(spec_bytes(bad))


def test_schema_mismatch_on_absent_column():
    bad = json.loads(json.dumps(MINIMAL))
    bad["encoding"]["y"]["field"] = "nope"
    with pytest.raises(SchemaMismatchError):
        parse_spec(spec_bytes(bad))


def test_malformed_json_is_syntax_error():
    with pytest.raises(SpecSyntaxError):
        parse_spec(b"{not json")


def test_unknown_top_level_keys_warn_but_parse():
    extended = dict(MINIMAL, usermeta={"x": 1}, selection={})
    spec = parse_spec(spec_bytes(extended))
    assert any("usermeta" in w for w in spec.warnings)
    assert any("selection" in w for w in spec.warnings)


def test_unsupported_channel_rejected():
    bad = json.loads(json.dumps(MINIMAL))
    bad["encoding"]["size"] = {"field": "interest", "type": "quantitative"}
    with pytest.raises(SchemaMismatchError):
        parse_spec(spec_bytes(bad))


def test_series_must_be_nominal_or_ordinal():
    bad = json.loads(json.dumps(MINIMAL))
    bad["data"]["values"][0]["run"] = 1.5
    bad["encoding"]["series"] = {"field": "run", "type": "quantitative"}
    with pytest.raises(SchemaMismatchError):
        parse_spec(spec_bytes(bad))


def test_color_channel_maps_to_series():
    obj = json.loads(json.dumps(MINIMAL))
    obj["data"]["values"][0]["site"] = "north"
    obj["encoding"]["color"] = {"field": "site", "type": "nominal"}
    spec = parse_spec(spec_bytes(obj))
    assert spec.series is not None and spec.series.field == "site"


def test_calculated_column_satisfies_schema_check():
    obj = json.loads(json.dumps(MINIMAL))
    obj["transform"] = [{"calculate": "interest * 100", "as": "bps"}]
    obj["encoding"]["y"]["field"] = "bps"
    spec = parse_spec(spec_bytes(obj))
    chart = load_chart(spec)
    assert chart.table.column("bps") == [25.0]


def test_parse_is_deterministic():
    raw = spec_bytes(MINIMAL)
    assert parse_spec(raw) == parse_spec(raw)


def test_parse_serialize_parse_round_trip(interest_chart):
    spec = interest_chart.spec
    again = parse_spec(serialize_spec(spec).encode("utf-8"), name=spec.name)
    # base path is not serialized; everything else must survive
    assert again.mark == spec.mark
    assert again.x == spec.x and again.y == spec.y
    assert again.transforms == spec.transforms
    assert again.resolution == spec.resolution
    assert again.data.values == spec.data.values


@given(
    mark=st.sampled_from(["line", "bar", "point"]),
    n=st.integers(min_value=1, max_value=8),
    unit=st.sampled_from(["", "%", "mm"]),
)
def test_generated_specs_round_trip(mark, n, unit):
    obj = {
        "name": "gen",
        "mark": mark,
        "encoding": {
            "x": {"field": "x", "type": "quantitative"},
            "y": {"field": "y", "type": "quantitative", "unit": unit},
        },
        "data": {"values": [{"x": i, "y": i * 2} for i in range(n)]},
    }
    first = parse_spec(spec_bytes(obj))
    second = parse_spec(serialize_spec(first).encode("utf-8"))
    assert first.mark == second.mark
    assert first.x == second.x and first.y == second.y
    assert first.data.values == second.data.values


def test_fixture_charts_parse(catalogue):
    assert catalogue.names() == [
        "city-rainfall",
        "daily-visitors",
        "interest-rates",
        "sensor-scatter",
    ]
    assert not catalogue.skipped
