"""Constrained natural-language answers from analytic results.

Encoded answer rules: context comes before data; units are always
included; every tied maximum or minimum is listed; "approximately" never
appears for exact values; data answers stay at or under 40 words (long
trend answers compact themselves); ambiguous queries come back as
clarification questions; touch-grounded answers say whether the referents
were data points or axis parts.

Each generated sentence records the element ids it talks about, so the
output stage can highlight referents chunk by chunk.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analytics import (
    CompareResult,
    ExtremeResult,
    RangeSummary,
    ScalarResult,
    TrendResult,
    ValueAtResult,
)
from .chart import LoadedChart
from .config import AgentConfig
from .fmt import format_number, format_value, word_count
from .frame import TactileFrame
from .temporal import TemporalValue, parse_temporal, unit_noun
from .touch import Selection


@dataclass(frozen=True)
class AgentResponse:
    text: str
    sentence_elements: tuple[tuple[str, ...], ...]
    commands: tuple[dict, ...] = ()
    confidence: float = 1.0
    intent: str = "DataExplore"
    off_screen: tuple[str, ...] = ()
    is_data_answer: bool = False

    @property
    def word_count(self) -> int:
        return word_count(self.text)


class _Sentences:
    """Accumulates sentences with their referenced element ids."""

    def __init__(self):
        self.parts: list[tuple[str, tuple[str, ...]]] = []

    def add(self, text: str, ids: tuple[str, ...] = ()):
        self.parts.append((text, ids))

    def build(self) -> tuple[str, tuple[tuple[str, ...], ...]]:
        text = " ".join(t for t, _ in self.parts)
        return text, tuple(ids for _, ids in self.parts)


def _element_for_label(frame: TactileFrame | None, x_label: str) -> str | None:
    if frame is None:
        return None
    for e in frame.data_elements():
        if e.datum is None:
            continue
        x_raw = e.datum[0]
        label = x_raw.label if isinstance(x_raw, TemporalValue) else format_value(x_raw)
        if label == x_label:
            return e.element_id
    return None


def _ids_for_labels(frame: TactileFrame | None, labels) -> tuple[tuple[str, ...], list[str]]:
    ids = []
    off_screen = []
    for label in labels:
        eid = _element_for_label(frame, label)
        if eid is None:
            off_screen.append(label)
        else:
            ids.append(eid)
    return tuple(ids), off_screen


def _short(label: str) -> str:
    """Quarter labels read as 'Q2 2020' in answers; other labels pass
    through."""
    try:
        return parse_temporal(label).short()
    except Exception:
        return label


def _num(v, unit: str) -> tuple[str, bool]:
    text, exact = format_number(v)
    return text + unit, exact


def _maybe_approx(v, unit: str) -> str:
    text, exact = _num(v, unit)
    return text if exact else f"approximately {text}"


def _referent_note(selections: tuple[Selection, ...]) -> str | None:
    if not selections:
        return None
    kinds = {s.kind for s in selections}
    if kinds == {"datum"}:
        if len(selections) == 1:
            return "The touched reference is a data point."
        return "Both touched references are data points."
    if "datum" not in kinds:
        return "The touched references are axis parts, not data points."
    return "One touched reference is an axis part, not a data point."


def _trend_clause(seg, y_unit: str, noun: str, first: bool) -> str:
    start, _ = _num(seg.start_value, y_unit)
    end, _ = _num(seg.end_value, y_unit)
    if seg.kind == "decline":
        verb = f"declined from {start} to {end}"
    elif seg.kind == "rise":
        verb = f"rose from {start} to {end}"
    else:
        verb = f"remained at {end} for {seg.points} {noun}"
    return verb if first else f"then {verb}"


def data_answer(
    result,
    chart: LoadedChart,
    frame: TactileFrame | None,
    selections: tuple[Selection, ...] = (),
    confidence: float = 1.0,
    config: AgentConfig | None = None,
) -> AgentResponse:
    """Render one analytic result as a constrained answer."""
    cfg = config or AgentConfig()
    y_field = chart.spec.y.field
    unit = chart.spec.y.unit
    noun = unit_noun([v for v in chart.table.column(chart.spec.x.field) if isinstance(v, TemporalValue)])
    s = _Sentences()
    off_screen: list[str] = []

    if isinstance(result, TrendResult):
        ids, off = _ids_for_labels(
            frame,
            [result.start_label, result.end_label]
            + [seg.end_label for seg in result.segments[:-1]],
        )
        off_screen += off
        clauses = [
            _trend_clause(seg, unit, noun, first=(i == 0)) for i, seg in enumerate(result.segments)
        ]
        text = (
            f"From {_short(result.start_label)} to {_short(result.end_label)}, "
            f"{y_field} " + ", ".join(clauses) + "."
        )
        if word_count(text) > cfg.max_answer_words or len(result.segments) > 4:
            first, last = result.segments[0], result.segments[-1]
            lo = min(min(seg.start_value, seg.end_value) for seg in result.segments)
            hi = max(max(seg.start_value, seg.end_value) for seg in result.segments)
            text = (
                f"From {_short(result.start_label)} to {_short(result.end_label)}, "
                f"{y_field} moved from {_num(first.start_value, unit)[0]} to "
                f"{_num(last.end_value, unit)[0]} across {len(result.segments)} phases, "
                f"between {_num(lo, unit)[0]} and {_num(hi, unit)[0]}."
            )
        s.add(text, ids)
    elif isinstance(result, ExtremeResult):
        places = " and ".join(_short(label) for label in result.labels)
        ids, off = _ids_for_labels(frame, result.labels)
        off_screen += off
        verb = "peaked at" if result.task == "max" else "was lowest at"
        s.add(f"Across the chart, {y_field} {verb} {_num(result.value, unit)[0]} in {places}.", ids)
    elif isinstance(result, ScalarResult):
        if result.task == "count":
            s.add(f"The selected range holds {result.value} {y_field} values.")
        elif result.task == "mean":
            s.add(
                f"Across {result.count} points, mean {y_field} was "
                f"{_maybe_approx(result.value, unit)}."
            )
        else:
            s.add(
                f"Across {result.count} points, total {y_field} was "
                f"{_maybe_approx(result.value, unit)}."
            )
    elif isinstance(result, ValueAtResult):
        ids, off = _ids_for_labels(frame, [result.label])
        off_screen += off
        s.add(f"At {_short(result.label)}, {y_field} was {_num(result.value, unit)[0]}.", ids)
    elif isinstance(result, CompareResult):
        ids, off = _ids_for_labels(frame, [result.a_label, result.b_label])
        off_screen += off
        diff_text, _ = format_number(abs(result.difference))
        diff_unit = " percentage points" if unit == "%" else unit
        direction = "rose" if result.difference > 0 else ("fell" if result.difference < 0 else "held")
        s.add(
            f"From {_short(result.a_label)} to {_short(result.b_label)}, {y_field} "
            f"{direction} by {diff_text}{diff_unit}, from {_num(result.a_value, unit)[0]} "
            f"to {_num(result.b_value, unit)[0]}.",
            ids,
        )
    elif isinstance(result, RangeSummary):
        ids, off = _ids_for_labels(frame, [result.start_label, result.end_label])
        off_screen += off
        s.add(
            f"From {_short(result.start_label)} to {_short(result.end_label)}, {y_field} "
            f"started at {_num(result.start, unit)[0]}, ranged {_num(result.vmin, unit)[0]} "
            f"to {_num(result.vmax, unit)[0]}, and ended at {_num(result.end, unit)[0]}.",
            ids,
        )
    else:
        raise TypeError(f"unknown result {result!r}")

    note = _referent_note(selections)
    if note:
        s.add(note, tuple(sel.element_id for sel in selections))
    text, sentence_elements = s.build()
    return AgentResponse(
        text=text,
        sentence_elements=sentence_elements,
        confidence=confidence,
        intent="DataExplore",
        off_screen=tuple(off_screen),
        is_data_answer=True,
    )


def clarification(question: str, confidence: float = 1.0, intent: str = "DataExplore") -> AgentResponse:
    from .output import sentence_spans

    return AgentResponse(
        text=question,
        sentence_elements=((),) * len(sentence_spans(question)),
        confidence=confidence,
        intent=intent,
    )


def overview_answer(chart: LoadedChart, frame: TactileFrame | None) -> AgentResponse:
    spec = chart.spec
    xs = [v for v in chart.table.column(spec.x.field) if v is not None]
    ys = [v for v in chart.table.column(spec.y.field) if v is not None]
    title = spec.title or spec.name or "This chart"
    s = _Sentences()
    head = (
        f"{title}: {spec.mark} chart of {spec.y.field}"
        + (f" ({spec.y.unit})" if spec.y.unit else "")
        + f" by {spec.x.field}, {chart.table.row_count} points"
    )
    if xs:
        head += f" from {format_value(min(xs))} to {format_value(max(xs))}"
    s.add(head + ".")
    if ys:
        s.add(
            f"Values run {format_value(min(ys))}{spec.y.unit} to "
            f"{format_value(max(ys))}{spec.y.unit}."
        )
    text, sentence_elements = s.build()
    return AgentResponse(text=text, sentence_elements=sentence_elements, intent="Overview")


def image_answer(chart: LoadedChart, has_preview: bool) -> AgentResponse:
    spec = chart.spec
    cols = ", ".join(f"{c.name} ({c.type})" for c in chart.table.columns)
    preview = "a preview attachment is available" if has_preview else "no preview is attached"
    text = (
        f"{spec.title or spec.name}: {spec.mark} chart with columns {cols}; "
        f"{chart.table.row_count} rows; {preview}."
    )
    return AgentResponse(text=text, sentence_elements=((),), intent="ImageAnalysis")


def load_answer(chart: LoadedChart) -> AgentResponse:
    spec = chart.spec
    text = (
        f"Loaded {spec.title or spec.name}: {spec.mark} chart of {spec.y.field} "
        f"by {spec.x.field}, {chart.table.row_count} points."
    )
    return AgentResponse(
        text=text,
        sentence_elements=((),),
        intent="LoadChart",
        commands=({"command": "load_chart", "name": spec.name},),
    )


def operation_answer(op: str, direction: str, ok: bool, detail: str = "") -> AgentResponse:
    if not ok:
        text = detail or f"Cannot {op} {direction} any further."
        return AgentResponse(text=text, sentence_elements=((),), intent="Operations")
    nice = {"geometric_in": "in", "geometric_out": "out", "semantic_in": "in for detail",
            "semantic_out": "out for summary"}.get(direction, direction)
    text = f"{'Zoomed' if op == 'zoom' else 'Panned' if op == 'pan' else 'Refreshed'} {nice}.".replace("  ", " ")
    if op == "refresh":
        text = "Refreshed the display."
    return AgentResponse(
        text=text,
        sentence_elements=((),),
        intent="Operations",
        commands=({"command": op, "direction": direction},),
    )
