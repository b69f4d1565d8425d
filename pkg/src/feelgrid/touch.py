"""Touch input: contact detection, tap classification, target inference,
and the per-finger selection cache that grounds deictic queries.

The stream carries only index fingers. Contact begins after two
consecutive frames at or below the enter threshold and survives until the
height exceeds the exit threshold, so surface-skimming jitter between the
two thresholds never chatters. Continuous tracing emits contact/move
events only; selections require the tap timing pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .config import TouchConfig
from .frame import ChartElement, TactileFrame

FINGERS = ("left_index", "right_index")


@dataclass(frozen=True)
class TouchFrame:
    timestamp: float  # ms
    finger: str
    x: float  # continuous, 0..60 pin units
    y: float  # continuous, 0..40 pin units
    height: float  # mm above the surface
    confidence: float = 1.0

    def cell(self) -> tuple[int, int]:
        col = min(59, max(0, int(self.x)))
        row = min(39, max(0, int(self.y)))
        return col, row


@dataclass(frozen=True)
class GestureEvent:
    kind: str  # contact_start | contact_move | contact_end | tap | double_tap
    finger: str
    grid_cell: tuple[int, int]
    timestamp: float
    position: tuple[float, float] = (0.0, 0.0)  # continuous contact point
    target: tuple[str, float] | None = None  # (element_id, probability)


@dataclass(frozen=True)
class Selection:
    finger: str
    element_id: str
    kind: str  # element kind: datum | axis_tick | axis_label
    label: str
    datum: tuple | None
    grid_cell: tuple[int, int]
    probability: float
    timestamp: float


@dataclass
class TouchContext:
    """Per-finger selection slots with a time-to-live."""

    ttl_ms: float = 30_000.0
    slots: dict[str, Selection] = field(default_factory=dict)

    def record(self, selection: Selection) -> None:
        self.slots[selection.finger] = selection

    def snapshot(self, now: float) -> list[Selection]:
        """Live selections in tap order; expired entries are dropped."""
        self.slots = {
            f: s for f, s in self.slots.items() if now - s.timestamp <= self.ttl_ms
        }
        return sorted(self.slots.values(), key=lambda s: s.timestamp)

    def clear(self) -> None:
        self.slots.clear()


class ContactTracker:
    """Per-finger contact state machine over raw touch frames."""

    def __init__(self, config: TouchConfig | None = None):
        self.config = config or TouchConfig()
        self._low_streak: dict[str, int] = {}
        self._in_contact: dict[str, bool] = {}
        self._last_cell: dict[str, tuple[int, int]] = {}
        self._last_pos: dict[str, tuple[float, float]] = {}
        self.dropped_frames = 0

    def feed(self, frame: TouchFrame) -> list[GestureEvent]:
        cfg = self.config
        if frame.confidence < cfg.min_confidence:
            self.dropped_frames += 1
            return []
        finger = frame.finger
        events: list[GestureEvent] = []
        in_contact = self._in_contact.get(finger, False)
        if not in_contact:
            if frame.height <= cfg.contact_enter_mm:
                streak = self._low_streak.get(finger, 0) + 1
                self._low_streak[finger] = streak
                if streak >= cfg.debounce_frames:
                    self._in_contact[finger] = True
                    self._last_cell[finger] = frame.cell()
                    self._last_pos[finger] = (frame.x, frame.y)
                    events.append(
                        GestureEvent(
                            kind="contact_start",
                            finger=finger,
                            grid_cell=frame.cell(),
                            timestamp=frame.timestamp,
                            position=(frame.x, frame.y),
                        )
                    )
            else:
                self._low_streak[finger] = 0
            return events
        # in contact: hysteresis band keeps contact until the exit height
        if frame.height > cfg.contact_exit_mm:
            self._in_contact[finger] = False
            self._low_streak[finger] = 0
            events.append(
                GestureEvent(
                    kind="contact_end",
                    finger=finger,
                    grid_cell=self._last_cell[finger],
                    timestamp=frame.timestamp,
                    position=self._last_pos[finger],
                )
            )
            return events
        cell = frame.cell()
        self._last_pos[finger] = (frame.x, frame.y)
        if cell != self._last_cell[finger]:
            self._last_cell[finger] = cell
            events.append(
                GestureEvent(
                    kind="contact_move",
                    finger=finger,
                    grid_cell=cell,
                    timestamp=frame.timestamp,
                    position=(frame.x, frame.y),
                )
            )
        return events


def detect_contact(frames, config: TouchConfig | None = None) -> list[GestureEvent]:
    """Batch contact detection over an ordered frame sequence."""
    tracker = ContactTracker(config)
    events: list[GestureEvent] = []
    for frame in frames:
        events.extend(tracker.feed(frame))
    return events


class TapClassifier:
    """Folds contact events into taps and double taps.

    A tap is a start-to-end contact within the tap window moving at most
    one cell. A second tap by the same finger starting within the gap
    window and one cell of the first absorbs both into a double tap.
    Emission is deferred until the gap window closes; ``flush`` finalizes.
    """

    def __init__(self, config: TouchConfig | None = None):
        self.config = config or TouchConfig()
        self._start: dict[str, GestureEvent] = {}
        self._moved_beyond: dict[str, bool] = {}
        self._pending_tap: dict[str, GestureEvent] = {}

    def _cells_close(self, a: tuple[int, int], b: tuple[int, int]) -> bool:
        return max(abs(a[0] - b[0]), abs(a[1] - b[1])) <= self.config.tap_max_move_cells

    def feed(self, event: GestureEvent) -> list[GestureEvent]:
        cfg = self.config
        finger = event.finger
        out: list[GestureEvent] = []
        out.extend(self.flush(event.timestamp, finger_filter=finger))
        if event.kind == "contact_start":
            self._start[finger] = event
            self._moved_beyond[finger] = False
            return out
        if event.kind == "contact_move":
            start = self._start.get(finger)
            if start and not self._cells_close(start.grid_cell, event.grid_cell):
                self._moved_beyond[finger] = True
            return out
        if event.kind != "contact_end":
            return out
        start = self._start.pop(finger, None)
        if start is None:
            return out
        duration = event.timestamp - start.timestamp
        moved = self._moved_beyond.pop(finger, False)
        is_tap = (
            duration <= cfg.tap_max_ms
            and not moved
            and self._cells_close(start.grid_cell, event.grid_cell)
        )
        if not is_tap:
            return out
        tap = GestureEvent(
            kind="tap",
            finger=finger,
            grid_cell=start.grid_cell,
            timestamp=event.timestamp,
            position=start.position,
        )
        pending = self._pending_tap.pop(finger, None)
        if (
            pending is not None
            and start.timestamp - pending.timestamp <= cfg.double_tap_gap_ms
            and self._cells_close(pending.grid_cell, tap.grid_cell)
        ):
            out.append(
                GestureEvent(
                    kind="double_tap",
                    finger=finger,
                    grid_cell=tap.grid_cell,
                    timestamp=tap.timestamp,
                    position=tap.position,
                )
            )
        else:
            if pending is not None:
                out.append(pending)
            self._pending_tap[finger] = tap
        return out

    def flush(self, now: float | None = None, finger_filter: str | None = None) -> list[GestureEvent]:
        """Emit pending taps whose double-tap window has closed (all of
        them when ``now`` is None)."""
        out = []
        for finger in list(self._pending_tap):
            if finger_filter is not None and finger != finger_filter:
                continue
            if now is not None and finger in self._start:
                continue  # pairing is decided when the live contact ends
            tap = self._pending_tap[finger]
            if now is None or now - tap.timestamp > self.config.double_tap_gap_ms:
                out.append(self._pending_tap.pop(finger))
        return out


def classify_taps(contact_events, config: TouchConfig | None = None) -> list[GestureEvent]:
    """Batch tap classification; the stream end flushes pending taps."""
    clf = TapClassifier(config)
    events: list[GestureEvent] = []
    for e in contact_events:
        events.extend(clf.feed(e))
    events.extend(clf.flush())
    return events


def score_candidates(
    point: tuple[float, float],
    elements,
    config: TouchConfig | None = None,
) -> list[tuple[ChartElement, float, float]]:
    """All (element, distance, probability) within the candidate radius.

    Weights are exp(-d^2 / (2 sigma^2)) normalized over the candidate set;
    if every weight underflows to zero the distribution degrades to
    uniform, which preserves the nearest-by-distance winner.
    """
    cfg = config or TouchConfig()
    px, py = point
    candidates = []
    for e in elements:
        d = math.hypot(px - e.grid_position[0], py - e.grid_position[1])
        if d <= cfg.candidate_radius_pins:
            candidates.append((e, d))
    if not candidates:
        return []
    weights = []
    for e, d in candidates:
        try:
            w = math.exp(-(d * d) / (2 * cfg.sigma_pins * cfg.sigma_pins))
        except OverflowError:
            w = 0.0
        weights.append(w)
    total = sum(weights)
    if total <= 0.0:
        uniform = 1.0 / len(candidates)
        return [(e, d, uniform) for (e, d) in candidates]
    return [(e, d, w / total) for (e, d), w in zip(candidates, weights)]


def infer_target(
    point: tuple[float, float],
    frame: TactileFrame,
    config: TouchConfig | None = None,
) -> tuple[str, float] | None:
    """Most likely touched element: argmax weight, ties to the smaller
    distance then the smaller element id; None when nothing is in range."""
    scored = score_candidates(point, frame.element_index, config)
    if not scored:
        return None
    best = min(scored, key=lambda t: (t[1], t[0].element_id))
    return best[0].element_id, best[2]


def resolve_double_tap(
    event: GestureEvent, frame: TactileFrame, config: TouchConfig | None = None
) -> GestureEvent:
    return replace(event, target=infer_target(event.position, frame, config))


def cache_selection(
    context: TouchContext, event: GestureEvent, frame: TactileFrame
) -> Selection | None:
    """Record a resolved double tap in its finger's slot; a miss (no
    target) records nothing and the caller reports it."""
    if event.target is None:
        return None
    element = frame.element(event.target[0])
    if element is None:
        return None
    selection = Selection(
        finger=event.finger,
        element_id=element.element_id,
        kind=element.kind,
        label=element.label,
        datum=element.datum,
        grid_cell=element.grid_position,
        probability=event.target[1],
        timestamp=event.timestamp,
    )
    context.record(selection)
    return selection


def synth_tap_frames(
    finger: str, x: float, y: float, t0: float, step_ms: float = 10.0
) -> list[TouchFrame]:
    """Canonical single-tap height profile: approach, three contact frames,
    retreat. Satisfies the debounce and tap-window rules by construction."""
    heights = [8.0, 5.0, 1.0, 1.0, 1.0, 8.0]
    return [
        TouchFrame(timestamp=t0 + i * step_ms, finger=finger, x=x, y=y, height=h)
        for i, h in enumerate(heights)
    ]


def synth_double_tap_frames(
    finger: str, x: float, y: float, t0: float, step_ms: float = 10.0, gap_ms: float = 100.0
) -> list[TouchFrame]:
    first = synth_tap_frames(finger, x, y, t0, step_ms)
    second = synth_tap_frames(finger, x, y, first[-1].timestamp + gap_ms, step_ms)
    return first + second
