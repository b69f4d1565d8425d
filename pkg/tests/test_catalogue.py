from __future__ import annotations

import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from feelgrid.catalogue import scan_catalogue

VALID = {
    "mark": "line",
    "encoding": {
        "x": {"field": "x", "type": "quantitative"},
        "y": {"field": "y", "type": "quantitative"},
    },
    "data": {"values": [{"x": 1, "y": 2}]},
}


def write_spec(root, name, obj):
    (root / f"{name}.vl.json").write_text(json.dumps(obj), encoding="utf-8")


def test_three_valid_one_malformed(tmp_path):
    # oracle: manual count of the fixture directory
    for i in range(3):
        write_spec(tmp_path, f"ok{i}", dict(VALID, name=f"ok{i}"))
    (tmp_path / "broken.vl.json").write_text("{nope", encoding="utf-8")
    catalogue = scan_catalogue(tmp_path)
    assert len(catalogue.entries) == 3
    assert len(catalogue.skipped) == 1
    assert catalogue.skipped[0].path.name == "broken.vl.json"


def test_empty_directory(tmp_path):
    catalogue = scan_catalogue(tmp_path)
    assert catalogue.entries == ()
    assert catalogue.skipped == ()


def test_identical_content_distinct_entries_same_digest(tmp_path):
    write_spec(tmp_path, "a", VALID)
    write_spec(tmp_path, "b", VALID)
    catalogue = scan_catalogue(tmp_path)
    assert [e.name for e in catalogue.entries] == ["a", "b"]
    assert catalogue.entries[0].digest == catalogue.entries[1].digest


def test_entries_sorted_by_name(tmp_path):
    for name in ("zeta", "alpha", "mid"):
        write_spec(tmp_path, name, dict(VALID, name=name))
    catalogue = scan_catalogue(tmp_path)
    assert [e.name for e in catalogue.entries] == ["alpha", "mid", "zeta"]


def test_unreadable_root_is_io_error(tmp_path):
    with pytest.raises(OSError):
        scan_catalogue(tmp_path / "missing")


def test_subdirectory_entries_use_relative_names(tmp_path):
    (tmp_path / "sub").mkdir()
    write_spec(tmp_path / "sub", "inner", VALID)
    write_spec(tmp_path, "outer", VALID)
    catalogue = scan_catalogue(tmp_path)
    assert [e.name for e in catalogue.entries] == ["outer", "sub/inner"]


def test_preview_bytes_pass_through(tmp_path):
    write_spec(tmp_path, "p", VALID)
    (tmp_path / "p.png").write_bytes(b"\x89PNG fake")
    catalogue = scan_catalogue(tmp_path)
    assert catalogue.entries[0].preview == b"\x89PNG fake"


def test_find_matches_loose_names(catalogue):
    assert catalogue.find("interest rates").name == "interest-rates"
    assert catalogue.find("Interest Rates").name == "interest-rates"
    assert catalogue.find("rainfall").name == "city-rainfall"
    assert catalogue.find("no such chart") is None


@settings(max_examples=25, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(
    valid=st.integers(min_value=0, max_value=5),
    broken=st.integers(min_value=0, max_value=3),
)
def test_entry_count_matches_parseable_files(tmp_path, valid, broken):
    import shutil

    root = tmp_path / f"case_{valid}_{broken}"
    if root.exists():
        shutil.rmtree(root)
    root.mkdir()
    for i in range(valid):
        write_spec(root, f"v{i}", dict(VALID, name=f"v{i}"))
    for i in range(broken):
        (root / f"x{i}.vl.json").write_text(json.dumps({"mark": "arc"}), encoding="utf-8")
    catalogue = scan_catalogue(root)
    assert len(catalogue.entries) == valid
    assert len(catalogue.skipped) == broken
