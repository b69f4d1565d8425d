"""Deterministic analytic tasks over a chart's table.

Every data-exploration answer routes through one of these nine tasks:
min, max, mean, sum, count, value_at, compare_points, range_describe,
trend. Range filters are inclusive on both endpoints. Trend analysis
segments the series into maximal runs of constant first-difference sign,
with |delta| < 1e-9 counting as flat.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyRangeError, UnknownColumnError
from .table import DataTable
from .temporal import TemporalValue
from .viewport import category_order, numeric_value

TASKS = (
    "min",
    "max",
    "mean",
    "sum",
    "count",
    "value_at",
    "compare_points",
    "range_describe",
    "trend",
)

PLATEAU_EPS = 1e-9


@dataclass(frozen=True)
class SeriesPoint:
    x: float  # ordering coordinate
    x_label: str
    y: float | int | None


@dataclass(frozen=True)
class ExtremeResult:
    task: str  # min | max
    value: float | int
    labels: tuple[str, ...]  # every x where the extreme occurs, in x order


@dataclass(frozen=True)
class ScalarResult:
    task: str  # mean | sum | count
    value: float | int
    count: int


@dataclass(frozen=True)
class ValueAtResult:
    label: str
    value: float | int


@dataclass(frozen=True)
class CompareResult:
    a_label: str
    a_value: float | int
    b_label: str
    b_value: float | int
    difference: float | int  # b - a


@dataclass(frozen=True)
class RangeSummary:
    start_label: str
    end_label: str
    start: float | int
    end: float | int
    vmin: float | int
    vmax: float | int
    mean: float
    count: int


@dataclass(frozen=True)
class TrendSegment:
    kind: str  # decline | plateau | rise
    start_label: str
    end_label: str
    start_value: float | int
    end_value: float | int
    points: int  # inclusive point count of the run


@dataclass(frozen=True)
class TrendResult:
    start_label: str
    end_label: str
    segments: tuple[TrendSegment, ...]


def series_points(
    table: DataTable,
    x_field: str,
    y_field: str,
    x_range: tuple[float, float] | None = None,
) -> list[SeriesPoint]:
    """The (x, y) series sorted by x, filtered to the inclusive range."""
    if x_field not in table.column_names():
        raise UnknownColumnError(f"no x column {x_field!r}")
    if y_field not in table.column_names():
        raise UnknownColumnError(f"no y column {y_field!r}")
    cats = None
    if table.column_type(x_field) in ("ordinal", "nominal"):
        cats = category_order(table, x_field)
    points = []
    for i, (xv, yv) in enumerate(zip(table.column(x_field), table.column(y_field))):
        x = numeric_value(xv, cats)
        if x is None:
            continue
        if x_range is not None and not (x_range[0] <= x <= x_range[1]):
            continue
        label = xv.label if isinstance(xv, TemporalValue) else str(xv)
        points.append((x, i, label, yv))
    points.sort(key=lambda p: (p[0], p[1]))
    return [SeriesPoint(x=x, x_label=label, y=y) for x, _, label, y in points]


def _values(points: list[SeriesPoint]) -> list:
    return [p.y for p in points if p.y is not None]


def calculate(
    task: str,
    table: DataTable,
    x_field: str,
    y_field: str,
    x_range: tuple[float, float] | None = None,
    x_at: float | None = None,
):
    """Run one analytic task; raises EmptyRangeError when the filtered
    series has no usable values."""
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r} (have {TASKS})")
    points = series_points(table, x_field, y_field, x_range)
    if task == "count":
        return ScalarResult(task="count", value=len(_values(points)), count=len(points))
    values = _values(points)
    if not values:
        raise EmptyRangeError(f"no values for {y_field!r} in range {x_range}")
    if task in ("min", "max"):
        extreme = min(values) if task == "min" else max(values)
        labels = tuple(p.x_label for p in points if p.y == extreme)
        return ExtremeResult(task=task, value=extreme, labels=labels)
    if task == "mean":
        return ScalarResult(task="mean", value=sum(values) / len(values), count=len(values))
    if task == "sum":
        return ScalarResult(task="sum", value=sum(values), count=len(values))
    if task == "value_at":
        if x_at is None:
            raise EmptyRangeError("value_at needs a target position")
        for p in points:
            if p.x == x_at and p.y is not None:
                return ValueAtResult(label=p.x_label, value=p.y)
        raise EmptyRangeError(f"no value at {x_at}")
    if task == "compare_points":
        usable = [p for p in points if p.y is not None]
        if len(usable) < 2:
            raise EmptyRangeError("compare_points needs two endpoints")
        a, b = usable[0], usable[-1]
        return CompareResult(
            a_label=a.x_label,
            a_value=a.y,
            b_label=b.x_label,
            b_value=b.y,
            difference=b.y - a.y,
        )
    if task == "range_describe":
        usable = [p for p in points if p.y is not None]
        return RangeSummary(
            start_label=usable[0].x_label,
            end_label=usable[-1].x_label,
            start=usable[0].y,
            end=usable[-1].y,
            vmin=min(values),
            vmax=max(values),
            mean=sum(values) / len(values),
            count=len(values),
        )
    return trend(points)


def _sign(delta: float) -> int:
    if abs(delta) < PLATEAU_EPS:
        return 0
    return 1 if delta > 0 else -1


_KINDS = {-1: "decline", 0: "plateau", 1: "rise"}


def trend(points: list[SeriesPoint]) -> TrendResult:
    """Maximal runs of constant first-difference sign, in series order.

    Sign changes close a segment at the earlier index, so consecutive
    segments share their boundary point.
    """
    usable = [p for p in points if p.y is not None]
    if len(usable) < 2:
        raise EmptyRangeError("trend needs at least two values")
    signs = [_sign(b.y - a.y) for a, b in zip(usable, usable[1:])]
    segments = []
    run_start = 0
    for i in range(1, len(signs) + 1):
        if i < len(signs) and signs[i] == signs[run_start]:
            continue
        first, last = usable[run_start], usable[i]
        segments.append(
            TrendSegment(
                kind=_KINDS[signs[run_start]],
                start_label=first.x_label,
                end_label=last.x_label,
                start_value=first.y,
                end_value=last.y,
                points=i - run_start + 1,
            )
        )
        run_start = i
    return TrendResult(
        start_label=usable[0].x_label,
        end_label=usable[-1].x_label,
        segments=tuple(segments),
    )
