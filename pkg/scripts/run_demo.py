#!/usr/bin/env python3
"""Run the worked-example interaction end to end and print what happened."""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from feelgrid.catalogue import scan_catalogue  # noqa: E402
from feelgrid.session import Session  # noqa: E402
from feelgrid.touch import synth_double_tap_frames  # noqa: E402

QUERY = "What was the trend of the interest rate data during this period?"


def main() -> None:
    session = Session(scan_catalogue(ROOT / "charts"))
    session.load_chart_by_name("interest-rates", t=0.0)

    first = session.frame.data_elements()[0]
    last = session.frame.data_elements()[-1]
    print(f"double-tapping {first.label} (left) and {last.label} (right)\n")
    for frame in synth_double_tap_frames(
        "left_index", float(first.grid_position[0]), float(first.grid_position[1]), 100.0
    ):
        session.feed_touch(frame)
    for frame in synth_double_tap_frames(
        "right_index", float(last.grid_position[0]), float(last.grid_position[1]), 600.0
    ):
        session.feed_touch(frame)

    response = session.submit_query(QUERY, t=1500.0)
    session.finish()

    print("spoken transcript:")
    for line in session.transcript():
        print(f"  {line.strip()}")
    print(f"\nagent answer ({response.word_count} words):\n  {response.text}")
    augmented = [e for e in session.log if e["kind"] == "augmented_query"]
    if augmented:
        print(f"\nfused query:\n  {augmented[0]['text']}")
    print("\nfinal frame:\n")
    print(session.frame.render_text().split("\n\n")[0])


if __name__ == "__main__":
    main()
