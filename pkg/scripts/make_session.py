#!/usr/bin/env python3
"""Regenerate fixtures/worked_example.session.jsonl.

The recorded session loads the interest-rates chart, double-taps the first
quarter with the left index finger and the last quarter with the right,
then asks the trend question. Touch coordinates come from the rendered
element positions, so rerun this after any renderer geometry change.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from feelgrid.catalogue import scan_catalogue  # noqa: E402
from feelgrid.replay import ReplayEvent, double_tap_events, format_events  # noqa: E402
from feelgrid.session import Session  # noqa: E402

QUERY = "What was the trend of the interest rate data during this period?"


def main() -> None:
    session = Session(scan_catalogue(ROOT / "charts"))
    session.load_chart_by_name("interest-rates", t=0.0)
    first = session.frame.data_elements()[0].grid_position
    last = session.frame.data_elements()[-1].grid_position

    events = [ReplayEvent(t=0.0, kind="load_chart", payload={"name": "interest-rates"})]
    events += double_tap_events("left_index", float(first[0]), float(first[1]), 100.0)
    events += double_tap_events("right_index", float(last[0]), float(last[1]), 600.0)
    events.append(ReplayEvent(t=1500.0, kind="query", payload={"text": QUERY}))

    out = ROOT / "fixtures" / "worked_example.session.jsonl"
    out.parent.mkdir(exist_ok=True)
    out.write_text(format_events(events), encoding="utf-8")
    print(f"wrote {out} ({len(events)} events)")


if __name__ == "__main__":
    main()
