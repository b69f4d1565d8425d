"""Rule-based intent routing over five categories.

The pattern table below is the router's whole behavior; it contains no
dataset-specific rules, so it generalizes across charts. Queries nothing
matches fall through to DataExplore with a clarification flag. A
configured external model may override the category (see model_port).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum


class IntentCategory(Enum):
    LOAD_CHART = "LoadChart"
    OVERVIEW = "Overview"
    IMAGE_ANALYSIS = "ImageAnalysis"
    OPERATIONS = "Operations"
    DATA_EXPLORE = "DataExplore"


@dataclass(frozen=True)
class Intent:
    category: IntentCategory
    slots: dict = field(default_factory=dict)
    needs_clarification: bool = False


_LOAD_RE = re.compile(r"\b(load|open|show|switch to|bring up)\b(?:\s+(?:the|a|me))?\s+(.*)", re.I)
_CHART_TAIL_RE = re.compile(r"\s*\b(chart|graph|plot|visuali[sz]ation)\b\s*$", re.I)

_OPERATION_PATTERNS: tuple[tuple[str, str, str], ...] = (
    # (regex, op kind, direction)
    (r"\bzoom\s+in\b", "zoom", "geometric_in"),
    (r"\bzoom\s+out\b", "zoom", "geometric_out"),
    (r"\b(more|extra|additional)\s+detail\b", "zoom", "semantic_in"),
    (r"\bless\s+detail\b", "zoom", "semantic_out"),
    (r"\bsemantic(ally)?\s+zoom\s+in\b", "zoom", "semantic_in"),
    (r"\bsemantic(ally)?\s+zoom\s+out\b", "zoom", "semantic_out"),
    (r"\bpan\s+left\b|\bmove\s+left\b|\bscroll\s+left\b", "pan", "left"),
    (r"\bpan\s+right\b|\bmove\s+right\b|\bscroll\s+right\b", "pan", "right"),
    (r"\bpan\s+up\b|\bmove\s+up\b|\bscroll\s+up\b", "pan", "up"),
    (r"\bpan\s+down\b|\bmove\s+down\b|\bscroll\s+down\b", "pan", "down"),
    (r"\brefresh\b|\bredraw\b", "refresh", ""),
)

_OVERVIEW_RE = re.compile(
    r"\b(overview|summar(y|ize|ise)|describe (the |this )?(chart|graph|data)"
    r"|what (is|does) (this|the) chart)\b",
    re.I,
)

_IMAGE_RE = re.compile(
    r"\b(image|picture|preview|look like|visual analysis|analy[sz]e the image)\b", re.I
)

_EXPLORE_TASKS: tuple[tuple[str, str], ...] = (
    (r"\btrend\b|\btrajectory\b|\bover time\b|\bpattern\b", "trend"),
    (r"\b(compare|difference|versus|vs\.?|gap between)\b", "compare_points"),
    (r"\b(max(imum)?|highest|largest|peak|top)\b", "max"),
    (r"\b(min(imum)?|lowest|smallest|bottom)\b", "min"),
    (r"\b(mean|average)\b", "mean"),
    (r"\b(sum|total)\b", "sum"),
    (r"\b(count|how many)\b", "count"),
    (r"\b(describe|statistics|stats|summary of)\b", "range_describe"),
    (r"\bvalue (at|of|in|for)\b|\bwhat (was|is) .* (at|in|on)\b", "value_at"),
)


def route_intent(text: str, has_touch_range: bool = False) -> Intent:
    """Deterministic routing of one (possibly augmented) transcript."""
    # strip any fused touch suffix before matching words
    bare = re.sub(r"\s*\(touched:.*\)\s*$", "", text).strip()

    m = _LOAD_RE.search(bare)
    if m and _CHART_TAIL_RE.search(bare):
        name = _CHART_TAIL_RE.sub("", m.group(2)).strip().strip("\"'")
        return Intent(IntentCategory.LOAD_CHART, slots={"name": name})

    for pattern, kind, direction in _OPERATION_PATTERNS:
        if re.search(pattern, bare, re.I):
            return Intent(IntentCategory.OPERATIONS, slots={"op": kind, "direction": direction})

    if _OVERVIEW_RE.search(bare):
        return Intent(IntentCategory.OVERVIEW)

    if _IMAGE_RE.search(bare):
        return Intent(IntentCategory.IMAGE_ANALYSIS)

    for pattern, task in _EXPLORE_TASKS:
        if re.search(pattern, bare, re.I):
            return Intent(IntentCategory.DATA_EXPLORE, slots={"task": task})

    if has_touch_range:
        # vague question over a touched range still has a sensible default
        return Intent(IntentCategory.DATA_EXPLORE, slots={"task": "range_describe"})
    return Intent(IntentCategory.DATA_EXPLORE, slots={}, needs_clarification=True)
