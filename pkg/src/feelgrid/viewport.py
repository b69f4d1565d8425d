"""Viewport state over a loaded chart: pan, geometric zoom, semantic zoom,
and automatic resolution-layer selection.

Domain coordinates are floats: temporal values use their day ordinal,
ordinal/nominal categories use their index, quantitative values pass
through. Windows are inclusive on both ends.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .chart import LoadedChart
from .errors import NoCoarserLayerError, NoFinerLayerError
from .table import DataTable
from .temporal import TemporalValue

PAN_STEP = 0.25  # fraction of window span per pan
PLOT_WIDTH = 54


@dataclass(frozen=True)
class ViewportState:
    x_window: tuple[float, float]
    y_window: tuple[float, float]
    magnification: float = 1.0
    active_layer: str | None = None

    def __post_init__(self):
        if not self.x_window[0] < self.x_window[1]:
            raise ValueError(f"x_window needs lo < hi, got {self.x_window}")
        if not self.y_window[0] < self.y_window[1]:
            raise ValueError(f"y_window needs lo < hi, got {self.y_window}")
        if self.magnification < 1:
            raise ValueError("magnification must be >= 1")


def category_order(table: DataTable, field: str, scale: tuple | None = None) -> list[str]:
    """Ordinal/nominal category order: explicit scale list, else first
    appearance."""
    if scale:
        return [str(c) for c in scale]
    seen: list[str] = []
    for v in table.column(field):
        if v is not None and v not in seen:
            seen.append(v)
    return seen


def numeric_value(v, categories: list[str] | None = None) -> float | None:
    if v is None:
        return None
    if isinstance(v, TemporalValue):
        return float(v.ordinal)
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    if categories is not None and v in categories:
        return float(categories.index(v))
    return None


def axis_values(chart: LoadedChart, axis: str, table: DataTable | None = None) -> list[float]:
    fd = chart.spec.x if axis == "x" else chart.spec.y
    table = table if table is not None else chart.table
    cats = None
    if fd.type in ("ordinal", "nominal"):
        cats = category_order(chart.table, fd.field, fd.scale)
    out = []
    for v in table.column(fd.field):
        n = numeric_value(v, cats)
        if n is not None:
            out.append(n)
    return out


def domain_extent(chart: LoadedChart, axis: str) -> tuple[float, float]:
    """Full data extent (or the explicit scale domain when declared)."""
    fd = chart.spec.x if axis == "x" else chart.spec.y
    if fd.type == "quantitative" and fd.scale is not None:
        return float(fd.scale[0]), float(fd.scale[1])
    if fd.type in ("ordinal", "nominal") and fd.scale is not None:
        n = len(fd.scale)
        return (0.0, float(n - 1)) if n > 1 else (-0.5, 0.5)
    values = axis_values(chart, axis)
    if not values:
        return (0.0, 1.0)
    lo, hi = min(values), max(values)
    if lo == hi:
        return (lo - 0.5, hi + 0.5)
    return (lo, hi)


def initial_viewport(chart: LoadedChart) -> ViewportState:
    vp = ViewportState(
        x_window=domain_extent(chart, "x"),
        y_window=domain_extent(chart, "y"),
        magnification=1.0,
        active_layer=None,
    )
    if chart.layers:
        vp = replace(vp, active_layer=select_layer(chart, vp, PLOT_WIDTH))
    return vp


def _shift_window(window: tuple[float, float], delta: float, extent: tuple[float, float]):
    lo, hi = window
    span = hi - lo
    ext_lo, ext_hi = extent
    if span >= ext_hi - ext_lo:
        return window  # window already covers all data
    lo += delta
    if lo < ext_lo:
        lo = ext_lo
    if lo + span > ext_hi:
        lo = ext_hi - span
    return (lo, lo + span)


def pan(viewport: ViewportState, direction: str, chart: LoadedChart) -> ViewportState:
    """Shift the window 25% of its span, clamped to the data extent."""
    if direction in ("left", "right"):
        span = viewport.x_window[1] - viewport.x_window[0]
        delta = -PAN_STEP * span if direction == "left" else PAN_STEP * span
        return replace(
            viewport, x_window=_shift_window(viewport.x_window, delta, domain_extent(chart, "x"))
        )
    if direction in ("up", "down"):
        span = viewport.y_window[1] - viewport.y_window[0]
        delta = PAN_STEP * span if direction == "up" else -PAN_STEP * span
        return replace(
            viewport, y_window=_shift_window(viewport.y_window, delta, domain_extent(chart, "y"))
        )
    raise ValueError(f"unknown pan direction {direction!r}")


def _scale_window(window: tuple[float, float], factor: float, extent: tuple[float, float]):
    lo, hi = window
    center = (lo + hi) / 2
    span = (hi - lo) * factor
    ext_span = extent[1] - extent[0]
    if span >= ext_span:
        return extent
    lo = center - span / 2
    hi = center + span / 2
    if lo < extent[0]:
        lo, hi = extent[0], extent[0] + span
    if hi > extent[1]:
        lo, hi = extent[1] - span, extent[1]
    return (lo, hi)


def zoom(viewport: ViewportState, mode: str, chart: LoadedChart) -> ViewportState:
    """Geometric zoom rescales both windows about their centers; semantic
    zoom steps the active resolution layer one unit finer or coarser."""
    if mode in ("geometric_in", "geometric_out"):
        factor = 0.5 if mode == "geometric_in" else 2.0
        x_ext = domain_extent(chart, "x")
        y_ext = domain_extent(chart, "y")
        x_window = _scale_window(viewport.x_window, factor, x_ext)
        y_window = _scale_window(viewport.y_window, factor, y_ext)
        mag = max(1.0, (x_ext[1] - x_ext[0]) / (x_window[1] - x_window[0]))
        return replace(viewport, x_window=x_window, y_window=y_window, magnification=mag)
    if mode in ("semantic_in", "semantic_out"):
        layer_ids = [layer.layer_id for layer in chart.layers]
        if not layer_ids:
            if mode == "semantic_in":
                raise NoFinerLayerError("chart has no resolution hierarchy")
            raise NoCoarserLayerError("chart has no resolution hierarchy")
        current = viewport.active_layer if viewport.active_layer in layer_ids else layer_ids[-1]
        i = layer_ids.index(current)
        if mode == "semantic_in":
            if i + 1 >= len(layer_ids):
                raise NoFinerLayerError(f"already at finest layer {current!r}")
            return replace(viewport, active_layer=layer_ids[i + 1])
        if i == 0:
            raise NoCoarserLayerError(f"already at coarsest layer {current!r}")
        return replace(viewport, active_layer=layer_ids[i - 1])
    raise ValueError(f"unknown zoom mode {mode!r}")


def in_window_count(chart: LoadedChart, table: DataTable, viewport: ViewportState) -> int:
    lo, hi = viewport.x_window
    return sum(1 for x in axis_values(chart, "x", table) if lo <= x <= hi)


def select_layer(chart: LoadedChart, viewport: ViewportState, plot_width: int = PLOT_WIDTH) -> str:
    """Finest layer whose in-window point count fits the plot width; the
    coarsest layer when nothing fits."""
    if not chart.layers:
        raise ValueError("chart has no resolution hierarchy")
    for layer in reversed(chart.layers):  # fine -> coarse
        if in_window_count(chart, layer.table, viewport) <= plot_width:
            return layer.layer_id
    return chart.layers[0].layer_id
