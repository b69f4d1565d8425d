"""Coordinated multimodal output: tactile highlights, Braille labels, and
timed speech-text events, plus sentence chunking and chunk playback.

Speech here is a timed text event (duration stubbed at 50 ms per character
with a 300 ms floor); a real synthesis adapter can replace the stub behind
the same event shape. Long responses split at sentence boundaries into
chunks whose concatenation reproduces the original text exactly, each
chunk carrying the highlight cells of the elements its sentence references.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import braille
from .buttons import ButtonAction
from .config import OutputConfig
from .frame import HEIGHT, WIDTH, ChartElement, TactileFrame
from .temporal import TemporalValue
from .fmt import format_value
from .touch import Selection

MISS_TEXT = "no data point here"


@dataclass(frozen=True)
class HighlightCommand:
    cells: frozenset[tuple[int, int]]
    style: str = "pulse"  # static | pulse
    pulse_rate_hz: float = 2.0
    persist_ms: float | None = 5_000.0  # None = until dismissed

    def __post_init__(self):
        for col, row in self.cells:
            if not (0 <= col < WIDTH and 0 <= row < HEIGHT):
                raise ValueError(f"highlight cell ({col},{row}) outside the frame")
        if self.style == "pulse" and not 0.5 <= self.pulse_rate_hz <= 4.0:
            raise ValueError(f"pulse rate {self.pulse_rate_hz} outside 0.5..4 Hz")


@dataclass(frozen=True)
class SpeechEvent:
    text: str
    started_at: float
    duration_ms: float

    def __post_init__(self):
        if self.text and self.duration_ms <= 0:
            raise ValueError("speech duration must be positive")


def speech_duration_ms(text: str, config: OutputConfig | None = None) -> float:
    cfg = config or OutputConfig()
    return max(cfg.speech_min_ms, len(text) * cfg.speech_ms_per_char)


@dataclass(frozen=True)
class ResponseChunk:
    index: int
    text: str
    referenced_elements: tuple[str, ...] = ()
    highlight: HighlightCommand | None = None
    braille_label: str | None = None


@dataclass(frozen=True)
class TouchResponse:
    """One selection acknowledgment across all three channels; the element
    ids and frame id bind the channels to the same referents."""

    highlight: HighlightCommand | None
    braille_pages: tuple[tuple[int, ...], ...]
    speech: SpeechEvent
    element_ids: tuple[str, ...]
    frame_id: int


def ring_cells(center: tuple[int, int], exclude: frozenset[tuple[int, int]]) -> set[tuple[int, int]]:
    """3x3 ring around a cell, clipped to the frame, minus the element's own
    footprint so the datum stays raised while the ring pulses."""
    col, row = center
    cells = set()
    for dc in (-1, 0, 1):
        for dr in (-1, 0, 1):
            c, r = col + dc, row + dr
            if (dc, dr) == (0, 0) or not (0 <= c < WIDTH and 0 <= r < HEIGHT):
                continue
            if (c, r) in exclude:
                continue
            cells.add((c, r))
    return cells


def spoken_selection(selection: Selection, y_field: str, unit: str) -> str:
    """'2020 Quarter 2, interest 0.25%' for data; axis touches name the axis."""
    if selection.kind != "datum" or selection.datum is None:
        return selection.label
    x_raw, y_raw, series = selection.datum
    x_spoken = x_raw.spoken() if isinstance(x_raw, TemporalValue) else format_value(x_raw)
    parts = f"{x_spoken}, {y_field} {format_value(y_raw)}{unit}"
    if series is not None:
        parts = f"{series}, {parts}"
    return parts


def touch_response(
    selections: list[Selection],
    frame: TactileFrame,
    y_field: str,
    unit: str,
    now: float,
    config: OutputConfig | None = None,
) -> TouchResponse:
    """Feedback for the current live selections, named in tap order."""
    cfg = config or OutputConfig()
    cells: set[tuple[int, int]] = set()
    for sel in selections:
        element = frame.element(sel.element_id)
        footprint = element.footprint if element else frozenset()
        cells |= ring_cells(sel.grid_cell, footprint)
    text = " ... ".join(spoken_selection(s, y_field, unit) for s in selections) + "."
    highlight = None
    if cells:
        highlight = HighlightCommand(
            cells=frozenset(cells),
            style=cfg.highlight_style,
            pulse_rate_hz=cfg.pulse_rate_hz,
            persist_ms=cfg.highlight_persist_ms,
        )
    return TouchResponse(
        highlight=highlight,
        braille_pages=tuple(braille.pages_for_text(text)),
        speech=SpeechEvent(text=text, started_at=now, duration_ms=speech_duration_ms(text, cfg)),
        element_ids=tuple(s.element_id for s in selections),
        frame_id=frame.frame_id,
    )


def miss_response(now: float, frame_id: int, config: OutputConfig | None = None) -> TouchResponse:
    """A double tap on background gets speech only, no highlight."""
    cfg = config or OutputConfig()
    return TouchResponse(
        highlight=None,
        braille_pages=tuple(braille.pages_for_text(MISS_TEXT)),
        speech=SpeechEvent(
            text=MISS_TEXT, started_at=now, duration_ms=speech_duration_ms(MISS_TEXT, cfg)
        ),
        element_ids=(),
        frame_id=frame_id,
    )


_TERMINATORS = ".!?"
_ABBREV_RE = re.compile(r"[Qq]\d+$|\b[A-Z]$")


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Half-open spans covering the text exactly, one per sentence.

    A terminator ends a sentence only when followed by whitespace or the
    end of text; a period between digits (decimals) never splits, and a
    period after an abbreviation-like token (Q2, single capitals) followed
    by a lowercase continuation is kept inside the sentence. Trailing
    whitespace belongs to the preceding sentence so concatenation is exact.
    """
    n = len(text)
    breaks: list[int] = []
    for i, ch in enumerate(text):
        if ch not in _TERMINATORS:
            continue
        if i + 1 < n and not text[i + 1].isspace():
            continue  # covers decimals like 0.25 as well
        if ch == ".":
            if 0 < i < n - 1 and text[i - 1].isdigit() and text[i + 1].isdigit():
                continue
            before = text[:i].rstrip()
            token = before.split()[-1] if before.split() else ""
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            if j < n and text[j].islower() and _ABBREV_RE.search(token):
                continue
        j = i + 1
        while j < n and text[j].isspace():
            j += 1
        if j < n:
            breaks.append(j)
    starts = [0] + breaks
    spans = [(s, e) for s, e in zip(starts, starts[1:] + [n])]
    return [sp for sp in spans if sp[0] < sp[1]] or ([(0, n)] if n else [])


def segment_response(
    text: str,
    sentence_elements: list[list[str]] | None = None,
    frame: TactileFrame | None = None,
    config: OutputConfig | None = None,
) -> list[ResponseChunk]:
    """One chunk per sentence, annotated with that sentence's referents.

    ``sentence_elements[i]`` lists the element ids the i-th sentence talks
    about; without attribution a chunk carries no highlight rather than a
    guess. Chunk texts concatenate back to ``text`` exactly.
    """
    cfg = config or OutputConfig()
    chunks: list[ResponseChunk] = []
    for idx, (start, end) in enumerate(sentence_spans(text)):
        ids: tuple[str, ...] = ()
        if sentence_elements is not None and idx < len(sentence_elements):
            ids = tuple(sentence_elements[idx])
        highlight = None
        if ids and frame is not None:
            cells: set[tuple[int, int]] = set()
            for element_id in ids:
                element = frame.element(element_id)
                if element is not None:
                    cells |= ring_cells(element.grid_position, element.footprint)
            if cells:
                highlight = HighlightCommand(
                    cells=frozenset(cells),
                    style=cfg.highlight_style,
                    pulse_rate_hz=cfg.pulse_rate_hz,
                    persist_ms=None,  # held until the next chunk or dismissal
                )
        chunks.append(
            ResponseChunk(
                index=idx,
                text=text[start:end],
                referenced_elements=ids,
                highlight=highlight,
            )
        )
    return chunks


@dataclass
class PlaybackMachine:
    """Chunk playback: highlight then speech per chunk, auto-advancing after
    each speech duration. Quick Left/Right page between chunks, F3 repeats,
    F2 stops and clears. All times are virtual milliseconds."""

    config: OutputConfig = field(default_factory=OutputConfig)
    chunks: list[ResponseChunk] = field(default_factory=list)
    log: list[dict] = field(default_factory=list)
    _cursor: int = 0
    _next_at: float | None = None
    active: bool = False

    def start(self, chunks: list[ResponseChunk], now: float) -> list[dict]:
        events = []
        if self.active:
            events.append(self._clear(now))  # a new response preempts
        self.chunks = list(chunks)
        self._cursor = 0
        self.active = bool(chunks)
        if self.active:
            events += self._issue(now)
        self.log.extend(events)
        return events

    def _issue(self, now: float) -> list[dict]:
        chunk = self.chunks[self._cursor]
        events = []
        if chunk.highlight is not None:
            events.append(
                {
                    "t": now,
                    "kind": "highlight",
                    "chunk": chunk.index,
                    "cells": sorted(chunk.highlight.cells),
                }
            )
        duration = speech_duration_ms(chunk.text, self.config)
        events.append({"t": now, "kind": "speech", "chunk": chunk.index, "text": chunk.text})
        self._next_at = now + duration
        return events

    def _clear(self, now: float) -> dict:
        self.active = False
        self._next_at = None
        return {"t": now, "kind": "clear"}

    def advance(self, to_t: float) -> list[dict]:
        """Emit every auto-advance due at or before ``to_t``."""
        events: list[dict] = []
        while self.active and self._next_at is not None and self._next_at <= to_t:
            t = self._next_at
            if self._cursor + 1 < len(self.chunks):
                self._cursor += 1
                events += self._issue(t)
            else:
                events.append(self._clear(t))
        self.log.extend(events)
        return events

    def control(self, action: ButtonAction, now: float) -> list[dict]:
        events = self.advance(now)
        if not self.active:
            return events
        fresh: list[dict] = []
        if action == ButtonAction.STOP_OUTPUTS:
            fresh = [self._clear(now)]
        elif action == ButtonAction.PAGE_RIGHT:
            if self._cursor + 1 < len(self.chunks):
                self._cursor += 1
                fresh = self._issue(now)
        elif action == ButtonAction.PAGE_LEFT:
            if self._cursor > 0:
                self._cursor -= 1
            fresh = self._issue(now)
        elif action == ButtonAction.REPEAT_AUDIO:
            fresh = self._issue(now)
        self.log.extend(fresh)
        return events + fresh

    def finish(self) -> list[dict]:
        """Run the playback to completion (end of replay or tests)."""
        events: list[dict] = []
        while self.active and self._next_at is not None:
            events += self.advance(self._next_at)
        return events


def play(
    chunks: list[ResponseChunk],
    controls: list[tuple[float, ButtonAction]] | None = None,
    start_at: float = 0.0,
    config: OutputConfig | None = None,
) -> list[dict]:
    """Simulate one full playback with optional timed controls; returns the
    ordered event log."""
    machine = PlaybackMachine(config=config or OutputConfig())
    events = machine.start(chunks, start_at)
    for t, action in sorted(controls or [], key=lambda c: c[0]):
        events += machine.control(action, t)
    events += machine.finish()
    return events
