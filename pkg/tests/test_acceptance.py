"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -s`` to watch).

Every tolerance is pinned here; nothing is deferred to calibration.
"""

from __future__ import annotations

import math
import random
import time
from contextlib import contextmanager

import pytest

from feelgrid.buttons import ButtonAction, classify_buttons
from feelgrid.config import TouchConfig
from feelgrid.output import segment_response
from feelgrid.protocol import decode, decode_one, encode
from feelgrid.renderer import render
from feelgrid.session import Session
from feelgrid.temporal import parse_temporal
from feelgrid.touch import infer_target, synth_double_tap_frames
from feelgrid.viewport import ViewportState, domain_extent, in_window_count, select_layer, zoom

from tests.test_agent import brute_force, random_table
from tests.test_buttons import press, random_stream
from tests.test_device import device_grid, naive_state_replay
from tests.test_protocol import random_packet
from tests.test_renderer import (
    brute_force_position,
    random_chart_and_viewport,
)
from tests.test_touch import element, elements_only


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL: {name}")
        raise
    print(f"ACCEPTANCE PASS: {name}")


QUERY = "What was the trend of the interest rate data during this period?"


def test_end_to_end_worked_example(catalogue):
    with criterion("end-to-end worked example (< 5 s)"):
        started = time.perf_counter()
        session = Session(catalogue)
        session.load_chart_by_name("interest-rates", t=0.0)
        first = session.frame.data_elements()[0].grid_position
        last = session.frame.data_elements()[-1].grid_position
        for f in synth_double_tap_frames("left_index", float(first[0]), float(first[1]), 100.0):
            session.feed_touch(f)
        for f in synth_double_tap_frames("right_index", float(last[0]), float(last[1]), 600.0):
            session.feed_touch(f)
        response = session.submit_query(QUERY, t=1500.0)
        session.finish()

        # (a) selection feedback names both touched values
        feedback = [t for t in session.transcript() if "..." in t]
        assert feedback, "no combined selection feedback"
        assert "0.25" in feedback[-1] and "3.85" in feedback[-1]

        # (b) the fused query carries both structured touch points
        augmented = [e for e in session.log if e["kind"] == "augmented_query"]
        assert len(augmented) == 1
        assert "point_A {quarter=2020-Q2, interest=0.25%}" in augmented[0]["text"]
        assert "point_B {quarter=2023-Q2, interest=3.85%}" in augmented[0]["text"]

        # (c) decline -> plateau at 0.10 -> rise
        text = response.text
        assert "declined" in text
        assert "remained at 0.10%" in text
        assert "rose" in text
        decline_at = text.index("declined")
        plateau_at = text.index("remained")
        rise_at = text.index("rose")
        assert decline_at < plateau_at < rise_at

        # (d) word budget
        assert response.word_count <= 40

        elapsed = time.perf_counter() - started
        assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_renderer_oracle_200_random_pairs():
    with criterion("renderer interpolation oracle + round-trip (200 pairs, < 30 s)"):
        started = time.perf_counter()
        rng = random.Random(20_24)
        pairs = 0
        data_checked = 0
        while pairs < 200:
            chart, viewport = random_chart_and_viewport(rng)
            frame = render(chart, viewport)
            frame.validate()
            for e in frame.data_elements():
                assert e.grid_position == brute_force_position(chart, e, viewport)
                data_checked += 1
            for e in frame.element_index:
                hit = infer_target(
                    (float(e.grid_position[0]), float(e.grid_position[1])), frame
                )
                assert hit is not None and hit[0] == e.element_id
            pairs += 1
        elapsed = time.perf_counter() - started
        assert data_checked > 1000
        assert elapsed < 30.0, f"took {elapsed:.2f}s"


def test_gaussian_inference():
    with criterion("Gaussian inference: 0.818 two-candidate case + sigma->0 oracle"):
        # hand-computed two-candidate case at distances 1 and 2
        got = infer_target(
            (10.0, 10.0),
            elements_only([element("near", 11, 10), element("far", 12, 10)]),
        )
        expected = math.exp(-0.5) / (math.exp(-0.5) + math.exp(-2.0))
        assert got[0] == "near"
        assert abs(got[1] - 0.818) <= 0.001
        assert abs(got[1] - expected) <= 1e-12

        # sigma = 0.05 agrees with brute-force nearest neighbor, 1000 frames
        cfg = TouchConfig(sigma_pins=0.05)
        rng = random.Random(55)
        agreements = 0
        for _ in range(1000):
            elements = [
                element(f"e{i:03d}", rng.randint(0, 59), rng.randint(0, 39))
                for i in range(rng.randint(1, 15))
            ]
            point = (rng.uniform(0, 59), rng.uniform(0, 39))
            got = infer_target(point, elements_only(elements), cfg)
            candidates = [
                (math.hypot(point[0] - e.grid_position[0], point[1] - e.grid_position[1]),
                 e.element_id)
                for e in elements
                if math.hypot(point[0] - e.grid_position[0], point[1] - e.grid_position[1])
                <= cfg.candidate_radius_pins
            ]
            if not candidates:
                assert got is None
            else:
                assert got[0] == min(candidates)[1]
            agreements += 1
        assert agreements == 1000


def test_gesture_and_button_state_machines():
    with criterion("gesture/button boundaries exact + replay determinism (100 streams)"):
        # quick-tap boundary at 200 ms (strict)
        assert [a for _, a in classify_buttons(press("Left", 0, 199))] == [ButtonAction.PAGE_LEFT]
        assert classify_buttons(press("Left", 0, 200)) == []
        # hold boundary at 500 ms (inclusive)
        assert [a for _, a in classify_buttons(press("F1", 0, 500))] == [ButtonAction.PUSH_TO_TALK]
        assert classify_buttons(press("F1", 0, 499)) == []
        # combo window 100 ms (inclusive)
        combo = [
            ("Left", "down", 0.0), ("F2", "down", 100.0),
            ("Left", "up", 400.0), ("F2", "up", 420.0),
        ]
        from feelgrid.buttons import ButtonEvent

        events = [ButtonEvent(b, e, t) for b, e, t in combo]
        assert [a for _, a in classify_buttons(events)] == [ButtonAction.ZOOM_OUT]
        apart = [ButtonEvent(b, e, t + (1.0 if b == "F2" else 0.0)) for b, e, t in combo]
        assert ButtonAction.ZOOM_OUT not in [a for _, a in classify_buttons(apart)]

        # double-tap gap 400 ms (inclusive), via the touch pipeline
        from feelgrid.touch import classify_taps, detect_contact, synth_tap_frames

        def kinds_for_gap(gap):
            first = synth_tap_frames("left_index", 10, 10, 0)
            second = synth_tap_frames("left_index", 10, 10, 50 + gap - 30)
            return [e.kind for e in classify_taps(detect_contact(first + second))]

        assert kinds_for_gap(400) == ["double_tap"]
        assert kinds_for_gap(401) == ["tap", "tap"]

        # tap window 250 ms (inclusive); contact_start lands on the second
        # low frame at t=10, so the end frame goes at 10 + duration
        from feelgrid.touch import TouchFrame

        def tap_of_duration(ms):
            spec = [(0.0, 1.0), (10.0, 1.0), (10.0 + ms, 8.0)]
            frames = [
                TouchFrame(timestamp=t, finger="left_index", x=5, y=5, height=h)
                for t, h in spec
            ]
            return [e.kind for e in classify_taps(detect_contact(frames))]

        assert tap_of_duration(250) == ["tap"]
        assert tap_of_duration(251) == []

        # replay determinism over 100 random valid streams
        for seed in range(100):
            stream = random_stream(random.Random(seed))
            assert classify_buttons(stream) == classify_buttons(stream)


def test_chunking(interest_chart):
    with criterion("chunking: two-sentence example, concat identity x1000, decimal guard"):
        from feelgrid.viewport import initial_viewport

        frame = render(interest_chart, initial_viewport(interest_chart))
        text = "In May 2021, interest rates increased to 0.25%. In June they dropped to 0.1%."
        chunks = segment_response(text, [["d004"], ["d005"]], frame)
        assert len(chunks) == 2
        assert chunks[0].highlight is not None and chunks[1].highlight is not None
        assert not (set(chunks[0].highlight.cells) & set(chunks[1].highlight.cells))
        assert "".join(c.text for c in chunks) == text

        rng = random.Random(9)
        words = ["interest", "rates", "rose", "to", "midway", "Q2", "then", "fell", "sharply"]
        for _ in range(1000):
            sentences = []
            for _ in range(rng.randint(1, 6)):
                body = " ".join(rng.choice(words) for _ in range(rng.randint(1, 8)))
                if rng.random() < 0.7:
                    body += f" {rng.uniform(0, 100):.2f}%"
                sentences.append(body + rng.choice([".", "!", "?"]))
            fuzzed = " ".join(sentences)
            got = segment_response(fuzzed)
            assert "".join(c.text for c in got) == fuzzed
            # decimal guard: no break may split a digit-dot-digit sequence
            offset = 0
            for c in got[:-1]:
                offset += len(c.text)
                around = fuzzed[max(0, offset - 2) : offset + 1]
                assert not (
                    len(around) == 3
                    and around[0].isdigit()
                    and around[1] == "."
                    and around[2].isdigit()
                ), f"break inside number near offset {offset}"
            for c in got:
                stripped = c.text.strip()
                assert not stripped or stripped[-1] in ".!?%" or c is got[-1]


def test_transforms_conservation_and_jitter():
    with criterion("transforms: sum/count conservation x100, means 1e-9, jitter seeds"):
        import datetime as dt

        from feelgrid.table import table_from_records
        from feelgrid.transforms import Jitter, apply_transforms, build_hierarchy

        rng = random.Random(31)
        for trial in range(100):
            days = rng.randint(1, 140)
            start = dt.date(2023, 1, 1) + dt.timedelta(days=rng.randint(0, 500))
            values = [round(rng.uniform(-100, 100), 6) for _ in range(days)]
            rows = [
                {"day": (start + dt.timedelta(days=i)).isoformat(), "v": values[i]}
                for i in range(days)
            ]
            table = table_from_records(rows, types={"day": "temporal", "v": "quantitative"})
            for op in ("sum", "count"):
                layers = build_hierarchy(table, ["month", "week", "day"], op, "v", "day")
                totals = [
                    sum(x for x in layer.table.column("v") if x is not None)
                    for layer in layers
                ]
                assert abs(totals[0] - totals[2]) < 1e-6
                assert abs(totals[1] - totals[2]) < 1e-6
            # mean layers match brute-force bucket means to 1e-9
            layers = build_hierarchy(table, ["week"], "mean", "v", "day")
            buckets: dict[str, list[float]] = {}
            for i in range(days):
                day = start + dt.timedelta(days=i)
                iso = day.isocalendar()
                buckets.setdefault(f"{iso.year}-W{iso.week:02d}", []).append(values[i])
            for row in layers[0].table.rows:
                members = buckets[row[0].label]
                assert abs(row[1] - sum(members) / len(members)) <= 1e-9
            # jitter reproducibility
            jit = Jitter(field="v", amplitude=1.5, seed=trial)
            assert apply_transforms(table, [jit]) == apply_transforms(table, [jit])


def test_protocol_round_trip_and_corruption():
    with criterion("protocol: 10,000 round-trips, 1-bit detection 100%, device oracle"):
        rng = random.Random(77)
        packets = [random_packet(rng) for _ in range(10_000)]
        for packet in packets:
            assert decode_one(encode(packet)) == packet

        # single-bit corruption: XOR checksum catches every 1-bit flip
        detected = 0
        trials = 500
        for i in range(trials):
            packet = packets[i]
            raw = bytearray(encode(packet))
            bit = rng.randrange(len(raw) * 8)
            raw[bit // 8] ^= 0x80 >> (bit % 8)
            result = decode(bytes(raw), finalize=True)
            clean = (
                len(result.packets) == 1
                and result.packets[0] == packet
                and not result.errors
                and result.skipped == 0
            )
            if not clean:
                detected += 1
        assert detected == trials, f"{detected}/{trials} detected"

        # simulated device equals the independent replay oracle
        from feelgrid.device import SimulatedDevice

        for _ in range(25):
            sequence = [random_packet(rng) for _ in range(rng.randint(1, 25))]
            device = SimulatedDevice()
            for packet in sequence:
                device.apply(packet)
            grid, braille = naive_state_replay(sequence)
            assert device_grid(device) == grid
            assert device.braille == braille


def test_calculation_pipeline_500_random_tables():
    with criterion("calculation pipeline: 9 tasks vs brute force on 500 tables"):
        from feelgrid.analytics import calculate
        from feelgrid.errors import EmptyRangeError

        rng = random.Random(4_000)
        sign_map = {"decline": -1, "plateau": 0, "rise": 1}
        for _ in range(500):
            table = random_table(rng, max_rows=1000)
            xs = [r[0] for r in table.rows]
            x_range = None
            if rng.random() < 0.5 and len(xs) > 2:
                a, b = sorted(rng.sample(xs, 2))
                x_range = (float(a), float(b))
            x_at = float(rng.choice(xs))

            for task in ("min", "max", "mean", "sum", "count"):
                expected = brute_force(task, table, x_range)
                try:
                    result = calculate(task, table, "x", "v", x_range)
                except EmptyRangeError:
                    assert expected is None
                    continue
                if task in ("min", "max"):
                    assert result.value == expected[0]  # exact
                    assert result.labels == expected[1]
                elif task in ("mean",):
                    assert abs(result.value - expected) <= 1e-9
                elif task == "sum":
                    if isinstance(expected, int):
                        assert result.value == expected
                    else:
                        assert abs(result.value - expected) <= 1e-9
                else:
                    assert result.value == expected  # count is integer-exact

            expected_at = brute_force("value_at", table, None, x_at=x_at)
            try:
                got_at = calculate("value_at", table, "x", "v", None, x_at)
                assert got_at.value == expected_at
            except EmptyRangeError:
                assert expected_at is None

            try:
                cmp_result = calculate("compare_points", table, "x", "v", x_range)
                expected_cmp = brute_force("compare_points", table, x_range)
                assert abs(cmp_result.difference - expected_cmp) <= 1e-9
            except EmptyRangeError:
                pass

            try:
                summary = calculate("range_describe", table, "x", "v", x_range)
                s, e, lo, hi, mean = brute_force("range_describe", table, x_range)
                assert summary.start == s and summary.end == e
                assert summary.vmin == lo and summary.vmax == hi
                assert abs(summary.mean - mean) <= 1e-9
            except EmptyRangeError:
                pass

            try:
                trend = calculate("trend", table, "x", "v", x_range)
                assert [sign_map[seg.kind] for seg in trend.segments] == brute_force(
                    "trend", table, x_range
                )
            except EmptyRangeError:
                pass


def test_semantic_zoom_layer_selection(catalogue):
    with criterion("semantic zoom: week at width 54, day after two zoom-ins"):
        from feelgrid.catalogue import load_entry

        chart = load_entry(catalogue, "daily-visitors")
        assert [layer.point_count for layer in chart.layers] == [3, 13, 90]
        viewport = ViewportState(
            x_window=domain_extent(chart, "x"), y_window=domain_extent(chart, "y")
        )
        assert select_layer(chart, viewport, plot_width=54) == "week"

        once = zoom(viewport, "geometric_in", chart)
        twice = zoom(once, "geometric_in", chart)
        day_layer = next(layer for layer in chart.layers if layer.layer_id == "day")
        assert in_window_count(chart, day_layer.table, twice) < 54
        assert select_layer(chart, twice, plot_width=54) == "day"
