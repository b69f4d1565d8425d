"""Deictic reference detection and touch-context fusion.

Queries like "what was the trend during this period?" get the cached touch
selections appended in a structured suffix the downstream planner (or an
external model) can read: ``(touched: point_A {quarter=2020-Q2,
interest=0.25%}; point_B {quarter=2023-Q2, interest=3.85%})``.

Confidence is a documented lexical-recency score: the strongest matching
marker weight, scaled by the liveliest selection's recency and spatial
probability (floor 0.5, so adding a selection never lowers confidence).
Fusion happens at or above the 0.40 threshold when selections exist.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .config import AgentConfig, TouchConfig
from .fmt import format_value
from .temporal import TemporalValue
from .touch import Selection

# (pattern, weight); first match of the highest weight wins
_MARKERS: tuple[tuple[str, float], ...] = (
    (r"\bbetween (these|those)\b", 1.0),
    (r"\b(these|those) (two )?(points?|bars?|values?|quarters?|days?)\b", 1.0),
    (r"\bthis (period|point|bar|region|range|interval|value|quarter|day)\b", 1.0),
    (r"\bthese\b", 0.8),
    (r"\bthose\b", 0.8),
    (r"\bhere\b", 0.8),
    (r"\bthis\b", 0.6),
    (r"\bthat\b", 0.4),
)

_BASE_SCALE = 0.5


@dataclass(frozen=True)
class DeicticResult:
    text: str  # augmented or original transcript
    confidence: float
    augmented: bool
    has_markers: bool
    selections: tuple[Selection, ...]  # the selections fused into the text


def marker_score(transcript: str) -> float:
    lowered = transcript.lower()
    best = 0.0
    for pattern, weight in _MARKERS:
        if weight > best and re.search(pattern, lowered):
            best = weight
    return best


def _selection_scale(
    selections: list[Selection], now: float, touch_cfg: TouchConfig
) -> float:
    best = 0.0
    for s in selections:
        age = max(0.0, now - s.timestamp)
        recency = max(0.5, 1.0 - 0.5 * age / touch_cfg.selection_ttl_ms)
        best = max(best, recency * s.probability)
    return max(_BASE_SCALE, best)


def selection_fragment(
    selection: Selection, x_field: str, y_field: str, unit: str
) -> str:
    if selection.kind == "datum" and selection.datum is not None:
        x_raw, y_raw, series = selection.datum
        x_txt = x_raw.label if isinstance(x_raw, TemporalValue) else format_value(x_raw)
        inner = f"{x_field}={x_txt}, {y_field}={format_value(y_raw)}{unit}"
        if series is not None:
            inner += f", series={series}"
        return "{" + inner + "}"
    return "{" + f"{selection.kind}: {selection.label}" + "}"


def classify_deictic(
    transcript: str,
    selections: list[Selection],
    now: float,
    x_field: str,
    y_field: str,
    unit: str = "",
    agent_cfg: AgentConfig | None = None,
    touch_cfg: TouchConfig | None = None,
) -> DeicticResult:
    """Fuse live selections into the transcript when the deictic score
    clears the threshold; otherwise return the transcript unchanged."""
    agent_cfg = agent_cfg or AgentConfig()
    touch_cfg = touch_cfg or TouchConfig()
    score = marker_score(transcript)
    confidence = score * _selection_scale(selections, now, touch_cfg)
    if not selections or confidence < agent_cfg.deictic_threshold:
        return DeicticResult(
            text=transcript,
            confidence=confidence,
            augmented=False,
            has_markers=score > 0,
            selections=(),
        )
    parts = []
    for i, s in enumerate(selections):
        name = f"point_{chr(ord('A') + i)}"
        parts.append(f"{name} {selection_fragment(s, x_field, y_field, unit)}")
    suffix = " (touched: " + "; ".join(parts) + ")"
    return DeicticResult(
        text=transcript + suffix,
        confidence=confidence,
        augmented=True,
        has_markers=score > 0,
        selections=tuple(selections),
    )
