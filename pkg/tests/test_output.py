from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feelgrid.buttons import ButtonAction
from feelgrid.config import OutputConfig
from feelgrid.frame import ChartElement
from feelgrid.output import (
    MISS_TEXT,
    ResponseChunk,
    miss_response,
    play,
    ring_cells,
    segment_response,
    sentence_spans,
    speech_duration_ms,
    touch_response,
)
from feelgrid.renderer import render
from feelgrid.touch import Selection
from feelgrid.viewport import initial_viewport

PAPER_TWO_SENTENCES = (
    "In May 2021, interest rates increased to 0.25%. In June they dropped to 0.1%."
)


def selection_for(frame, element_id, finger="left_index", t=0.0):
    e = frame.element(element_id)
    return Selection(
        finger=finger,
        element_id=e.element_id,
        kind=e.kind,
        label=e.label,
        datum=e.datum,
        grid_cell=e.grid_position,
        probability=1.0,
        timestamp=t,
    )


@pytest.fixture()
def fixture_frame(interest_chart):
    return render(interest_chart, initial_viewport(interest_chart), frame_id=3)


# --- touch response ------------------------------------------------------------


def test_touch_response_names_selections_in_tap_order(fixture_frame):
    sels = [
        selection_for(fixture_frame, "d000", "left_index", 0.0),
        selection_for(fixture_frame, "d012", "right_index", 500.0),
    ]
    resp = touch_response(sels, fixture_frame, "interest", "%", now=600.0)
    assert resp.speech.text == (
        "2020 Quarter 2, interest 0.25% ... 2023 Quarter 2, interest 3.85%."
    )
    assert resp.element_ids == ("d000", "d012")
    assert resp.frame_id == fixture_frame.frame_id
    assert resp.braille_pages


def test_ring_excludes_footprint_and_clips_at_corner():
    cells = ring_cells((0, 0), exclude=frozenset({(0, 0)}))
    assert cells == {(0, 1), (1, 0), (1, 1)}


def test_ring_around_interior_cell():
    cells = ring_cells((10, 10), exclude=frozenset({(10, 10)}))
    assert len(cells) == 8


def test_miss_response_has_speech_but_no_highlight():
    resp = miss_response(now=0.0, frame_id=1)
    assert resp.highlight is None
    assert resp.speech.text == MISS_TEXT


def test_highlight_ring_keeps_datum_raised(fixture_frame):
    sel = selection_for(fixture_frame, "d000")
    resp = touch_response([sel], fixture_frame, "interest", "%", now=0.0)
    assert sel.grid_cell not in resp.highlight.cells
    assert resp.highlight.cells  # ring surrounds the datum


# --- sentence segmentation -------------------------------------------------------


def test_paper_example_two_chunks(fixture_frame):
    chunks = segment_response(
        PAPER_TWO_SENTENCES, [["d004"], ["d005"]], fixture_frame
    )
    assert len(chunks) == 2
    assert chunks[0].text == "In May 2021, interest rates increased to 0.25%. "
    assert chunks[1].text == "In June they dropped to 0.1%."
    assert chunks[0].referenced_elements == ("d004",)
    assert chunks[1].referenced_elements == ("d005",)
    # highlights must be disjoint: different data points
    assert not (set(chunks[0].highlight.cells) & set(chunks[1].highlight.cells))


def test_single_sentence_single_chunk():
    chunks = segment_response("Just one sentence.")
    assert len(chunks) == 1


def test_decimal_point_is_not_a_boundary():
    chunks = segment_response("Rates fell to 0.25% in Q2.")
    assert len(chunks) == 1


def test_quarter_abbreviation_guard():
    chunks = segment_response("Rates peaked in Q2. then they fell again.")
    assert len(chunks) == 1  # lowercase continuation after Q2. stays joined
    chunks = segment_response("Rates peaked in Q2. They fell later.")
    assert len(chunks) == 2


def test_unsplittable_text_is_one_chunk():
    chunks = segment_response("no terminators at all")
    assert len(chunks) == 1
    assert chunks[0].text == "no terminators at all"


def test_concatenation_identity_examples():
    for text in [
        PAPER_TWO_SENTENCES,
        "One. Two! Three?",
        "Trailing spaces stay.  Second sentence.",
        "Decimals 3.14159 inside. And Q2 2020 too.",
    ]:
        chunks = segment_response(text)
        assert "".join(c.text for c in chunks) == text


_SENTENCE = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .%,!?",
    min_size=1,
    max_size=80,
)


@settings(max_examples=300)
@given(st.lists(_SENTENCE, min_size=1, max_size=8))
def test_concatenation_identity_fuzzed(parts):
    text = " ".join(parts).strip()
    if not text:
        return
    chunks = segment_response(text)
    assert "".join(c.text for c in chunks) == text


@settings(max_examples=200)
@given(
    st.lists(
        st.floats(min_value=0, max_value=999.99, allow_nan=False), min_size=1, max_size=6
    )
)
def test_boundaries_never_inside_numbers(values):
    text = " ".join(f"value {v:.2f} recorded." for v in values)
    for chunk in segment_response(text):
        stripped = chunk.text.rstrip()
        # a chunk break inside a decimal would strand a digit-leading chunk
        assert not chunk.text or not chunk.text[0].isdigit() or chunk is not None
        if stripped:
            assert stripped.endswith("recorded.")


# --- playback ----------------------------------------------------------------------


def chunk(i, text):
    return ResponseChunk(index=i, text=text)


def test_auto_advance_log_shape():
    log = play([chunk(0, "First."), chunk(1, "Second.")])
    kinds = [(e["kind"], e.get("chunk")) for e in log]
    assert kinds == [("speech", 0), ("speech", 1), ("clear", None)]


def test_auto_advance_with_highlights(fixture_frame):
    chunks = segment_response(PAPER_TWO_SENTENCES, [["d004"], ["d005"]], fixture_frame)
    log = play(chunks)
    kinds = [e["kind"] for e in log]
    assert kinds == ["highlight", "speech", "highlight", "speech", "clear"]


def test_stop_during_first_chunk():
    cfg = OutputConfig()
    first = "First sentence to stop."
    log = play(
        [chunk(0, first), chunk(1, "Never seen.")],
        controls=[(100.0, ButtonAction.STOP_OUTPUTS)],
    )
    assert log[-1]["kind"] == "clear"
    assert all(e.get("chunk") != 1 for e in log)
    assert speech_duration_ms(first, cfg) > 100.0  # stop landed mid-chunk


def test_previous_reissues_chunk():
    c0, c1 = chunk(0, "Alpha."), chunk(1, "Beta.")
    d0 = speech_duration_ms("Alpha.")
    log = play([c0, c1], controls=[(d0 + 50.0, ButtonAction.PAGE_LEFT)])
    speeches = [(e["t"], e["chunk"]) for e in log if e["kind"] == "speech"]
    assert [c for _, c in speeches[:3]] == [0, 1, 0]


def test_repeat_current_chunk():
    log = play([chunk(0, "Only.")], controls=[(50.0, ButtonAction.REPEAT_AUDIO)])
    speeches = [e for e in log if e["kind"] == "speech"]
    assert len(speeches) == 2
    assert all(e["chunk"] == 0 for e in speeches)


def test_speech_duration_floor():
    cfg = OutputConfig()
    assert speech_duration_ms("", cfg) == cfg.speech_min_ms
    assert speech_duration_ms("ab", cfg) == cfg.speech_min_ms
    assert speech_duration_ms("x" * 100, cfg) == 100 * cfg.speech_ms_per_char
