"""Recorded-session files: line-delimited events replayed through the full
stack on a virtual clock.

Each line is ``{"t": <ms>, "kind": ..., "payload": {...}}``. Kinds:
load_chart {name}, touch {finger,x,y,height,confidence?}, button
{button,edge}, query {text}, wait {} (pure clock advance). Blank lines and
lines starting with '#' are skipped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .buttons import ButtonEvent
from .session import Session
from .touch import TouchFrame

KINDS = ("load_chart", "touch", "button", "query", "wait")


class ReplaySyntaxError(Exception):
    pass


@dataclass(frozen=True)
class ReplayEvent:
    t: float
    kind: str
    payload: dict


def parse_session_file(text: str) -> list[ReplayEvent]:
    events = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
            t = float(obj["t"])
            kind = obj["kind"]
            payload = obj.get("payload", {})
        except (ValueError, KeyError, TypeError) as exc:
            raise ReplaySyntaxError(f"line {lineno}: {exc}") from exc
        if kind not in KINDS:
            raise ReplaySyntaxError(f"line {lineno}: unknown kind {kind!r}")
        if not isinstance(payload, dict):
            raise ReplaySyntaxError(f"line {lineno}: payload must be an object")
        events.append(ReplayEvent(t=t, kind=kind, payload=payload))
    return events


def load_session_file(path: Path | str) -> list[ReplayEvent]:
    return parse_session_file(Path(path).read_text(encoding="utf-8"))


def apply_event(session: Session, event: ReplayEvent) -> None:
    if event.kind == "load_chart":
        session.load_chart_by_name(event.payload["name"], t=event.t)
    elif event.kind == "touch":
        p = event.payload
        session.feed_touch(
            TouchFrame(
                timestamp=event.t,
                finger=p["finger"],
                x=float(p["x"]),
                y=float(p["y"]),
                height=float(p["height"]),
                confidence=float(p.get("confidence", 1.0)),
            )
        )
    elif event.kind == "button":
        p = event.payload
        session.feed_button(ButtonEvent(button=p["button"], edge=p["edge"], timestamp=event.t))
    elif event.kind == "query":
        session.submit_query(event.payload["text"], t=event.t)
    elif event.kind == "wait":
        session._advance(event.t)


def replay(session: Session, events: list[ReplayEvent]) -> list[dict]:
    """Feed every event in order, finish playback, return the session log."""
    for event in events:
        apply_event(session, event)
    session.finish()
    return session.log


def format_log(log: list[dict]) -> str:
    lines = [json.dumps(entry, sort_keys=True, default=_jsonify) for entry in log]
    return "\n".join(lines) + ("\n" if lines else "")


def _jsonify(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    return str(value)


def double_tap_events(finger: str, x: float, y: float, t0: float) -> list[ReplayEvent]:
    """Session-file events for one canonical double tap at a position."""
    from .touch import synth_double_tap_frames

    return [
        ReplayEvent(
            t=f.timestamp,
            kind="touch",
            payload={"finger": f.finger, "x": f.x, "y": f.y, "height": f.height},
        )
        for f in synth_double_tap_frames(finger, x, y, t0)
    ]


def format_events(events: list[ReplayEvent]) -> str:
    lines = [
        json.dumps({"t": e.t, "kind": e.kind, "payload": e.payload}, sort_keys=True)
        for e in events
    ]
    return "\n".join(lines) + ("\n" if lines else "")
