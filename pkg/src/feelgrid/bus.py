"""In-process topic bus with per-topic FIFO delivery.

Semantics mirror a lightweight broker at QoS 0: no retained messages, no
persistence; a late subscriber misses earlier envelopes. Topics come from
a fixed table (see docs/wire.md) and payloads are checked against each
topic's required keys. Subscription patterns are exact topics or use ``+``
as a single-level wildcard.
"""

from __future__ import annotations

import json
import queue
import re
import threading
from dataclasses import dataclass, field as dc_field

from .errors import InvalidPatternError, SchemaViolationError, UnknownTopicError

# topic -> required payload keys
TOPICS: dict[str, tuple[str, ...]] = {
    "vis/catalogue": ("charts",),
    "user/query": ("text",),
    "agent/response": ("text", "chunks"),
    "agent/command": ("command",),
    "device/frame": ("frame_id", "pins"),
    "session/event": ("kind",),
}

_LEVEL_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


@dataclass(frozen=True)
class Envelope:
    topic: str
    payload: dict
    seq: int
    timestamp: float

    def to_json(self) -> str:
        return json.dumps(
            {"topic": self.topic, "seq": self.seq, "t": self.timestamp, "payload": self.payload},
            sort_keys=True,
        )


def envelope_from_json(line: str) -> Envelope:
    obj = json.loads(line)
    return Envelope(
        topic=obj["topic"],
        payload=obj.get("payload", {}),
        seq=int(obj.get("seq", 0)),
        timestamp=float(obj.get("t", 0.0)),
    )


def validate_pattern(pattern: str) -> list[str]:
    levels = pattern.split("/")
    if not levels or any(not level for level in levels):
        raise InvalidPatternError(f"empty level in pattern {pattern!r}")
    for level in levels:
        if level != "+" and not _LEVEL_RE.match(level):
            raise InvalidPatternError(f"bad level {level!r} in pattern {pattern!r}")
    return levels


def topic_matches(pattern: str, topic: str) -> bool:
    p_levels = pattern.split("/")
    t_levels = topic.split("/")
    if len(p_levels) != len(t_levels):
        return False
    return all(p == "+" or p == t for p, t in zip(p_levels, t_levels))


@dataclass
class Subscription:
    pattern: str
    _queue: "queue.SimpleQueue[Envelope]" = dc_field(default_factory=queue.SimpleQueue)
    _bus: "Bus | None" = None
    active: bool = True

    def deliver(self, envelope: Envelope) -> None:
        if self.active:
            self._queue.put(envelope)

    def get(self, timeout: float | None = None) -> Envelope | None:
        try:
            return self._queue.get(timeout=timeout) if timeout is not None else self._queue.get_nowait()
        except queue.Empty:
            return None

    def drain(self) -> list[Envelope]:
        out = []
        while True:
            item = self.get()
            if item is None:
                return out
            out.append(item)

    def unsubscribe(self) -> None:
        self.active = False
        if self._bus is not None:
            self._bus._remove(self)


class Bus:
    """Thread-safe publish/subscribe hub. ``clock`` stamps envelopes; the
    default keeps timestamps at zero so replay logs never see wall time."""

    def __init__(self, clock=None, topics: dict[str, tuple[str, ...]] | None = None):
        self._clock = clock or (lambda: 0.0)
        self._topics = dict(topics if topics is not None else TOPICS)
        self._lock = threading.Lock()
        self._seq: dict[str, int] = {}
        self._subs: list[Subscription] = []

    def publish(self, topic: str, payload: dict, timestamp: float | None = None) -> int:
        if topic not in self._topics:
            raise UnknownTopicError(f"topic {topic!r} not in the topic table")
        if not isinstance(payload, dict):
            raise SchemaViolationError(f"payload must be an object, got {type(payload).__name__}")
        missing = [k for k in self._topics[topic] if k not in payload]
        if missing:
            raise SchemaViolationError(f"payload for {topic!r} missing keys {missing}")
        with self._lock:
            seq = self._seq.get(topic, 0) + 1
            self._seq[topic] = seq
            envelope = Envelope(
                topic=topic,
                payload=payload,
                seq=seq,
                timestamp=self._clock() if timestamp is None else timestamp,
            )
            targets = [s for s in self._subs if topic_matches(s.pattern, topic)]
        for sub in targets:  # subscription order
            sub.deliver(envelope)
        return seq

    def subscribe(self, pattern: str) -> Subscription:
        validate_pattern(pattern)
        sub = Subscription(pattern=pattern, _bus=self)
        with self._lock:
            self._subs.append(sub)
        return sub

    def _remove(self, sub: Subscription) -> None:
        with self._lock:
            if sub in self._subs:
                self._subs.remove(sub)

    def topics(self) -> list[str]:
        return sorted(self._topics)
