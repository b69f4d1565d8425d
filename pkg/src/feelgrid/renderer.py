"""Chart-to-pin-grid rendering.

Geometry: columns 0-5 hold the y axis (line at column 5, tick nubs at
column 4, vertical scroll strip at column 0); rows 34-39 hold the x axis
(line at row 34, tick nubs at row 35, horizontal scroll strips at row 39).
The plot area is columns 6..59 by rows 0..33 (54x34 pins).

Values map to cells by linear interpolation with half-away-from-zero
rounding, rows inverted so row 0 is the top. Bars are two cells wide and
fill from the zero line, point marks keep a one-cell lowered halo, and
line vertices connect with textured segments that stay out of the element
index so touch targets remain the vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import braille
from .chart import LoadedChart
from .errors import OutOfWindowError, TooManySeriesError
from .fmt import format_value, round_half_away
from .frame import ChartElement, FrameBuilder, Marker, TactileFrame
from .temporal import TemporalValue
from .viewport import ViewportState, axis_values, category_order, domain_extent, numeric_value

PLOT_LEFT = 6
PLOT_RIGHT = 59
PLOT_TOP = 0
PLOT_BOTTOM = 33
PLOT_WIDTH = PLOT_RIGHT - PLOT_LEFT + 1  # 54
PLOT_HEIGHT = PLOT_BOTTOM - PLOT_TOP + 1  # 34

X_AXIS_ROW = 34
X_TICK_ROW = 35
Y_AXIS_COL = 5
Y_TICK_COL = 4
H_SCROLL_ROW = 39
V_SCROLL_COL = 0

MAX_X_TICKS = 5
MAX_Y_TICKS = 4
MAX_SERIES = 4

# Per-series 1D texture for line segments (pattern of raised pins along the
# segment) and 2D texture for bar fills; index 0 is solid.
_SEGMENT_PATTERNS = (
    lambda i: True,          # solid
    lambda i: i % 2 == 0,    # dotted alternate
    lambda i: i % 3 != 2,    # dashed (2 on, 1 off)
    lambda i: i % 3 == 0,    # sparse
)
_FILL_PATTERNS = (
    lambda c, r: True,
    lambda c, r: (c + r) % 2 == 0,
    lambda c, r: (r // 2) % 2 == 0,
    lambda c, r: c % 2 == 0 and r % 2 == 0,
)


def map_to_grid(
    x: float,
    y: float,
    x_window: tuple[float, float],
    y_window: tuple[float, float],
) -> tuple[int, int]:
    """Map one in-window (x, y) to a plot cell by linear interpolation."""
    x_lo, x_hi = x_window
    y_lo, y_hi = y_window
    if not (x_lo <= x <= x_hi and y_lo <= y <= y_hi):
        raise OutOfWindowError(f"({x}, {y}) outside windows {x_window} x {y_window}")
    col = PLOT_LEFT + round_half_away((x - x_lo) / (x_hi - x_lo) * (PLOT_WIDTH - 1))
    row = PLOT_TOP + round_half_away((y_hi - y) / (y_hi - y_lo) * (PLOT_HEIGHT - 1))
    return col, row


def nice_ticks(lo: float, hi: float, max_count: int) -> list[float]:
    """Round tick values (multiples of 1/2/5 x 10^k) inside [lo, hi]."""
    import math

    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(1, max_count)
    mag = 10.0 ** math.floor(math.log10(raw)) if raw > 0 else 1.0
    for mult in (1, 2, 5, 10, 20, 50, 100):
        step = mag * mult
        first = math.ceil(lo / step - 1e-9) * step
        ticks = []
        v = first
        while v <= hi + 1e-9:
            ticks.append(round(v, 10))
            v += step
        if len(ticks) <= max_count:
            return ticks
    return []


def _thin(values: list, max_count: int) -> list:
    if len(values) <= max_count:
        return values
    n = len(values)
    picked = []
    for i in range(max_count):
        j = round_half_away(i * (n - 1) / (max_count - 1))
        if not picked or values[j] != picked[-1]:
            picked.append(values[j])
    return picked


@dataclass(frozen=True)
class _Point:
    x: float
    y: float
    x_raw: object
    y_raw: object
    series: str | None
    row_index: int


def _visible_points(chart: LoadedChart, viewport: ViewportState) -> tuple[list[_Point], dict]:
    spec = chart.spec
    table = chart.layer_table(viewport.active_layer)
    cats = None
    if spec.x.type in ("ordinal", "nominal"):
        cats = category_order(chart.table, spec.x.field, spec.x.scale)
    xs = table.column(spec.x.field)
    ys = table.column(spec.y.field)
    series_values = table.column(spec.series.field) if spec.series else [None] * table.row_count

    points = []
    beyond = {"left": 0, "right": 0, "above": 0, "below": 0, "total": 0}
    (x_lo, x_hi), (y_lo, y_hi) = viewport.x_window, viewport.y_window
    for i, (xv, yv, sv) in enumerate(zip(xs, ys, series_values)):
        x = numeric_value(xv, cats)
        y = numeric_value(yv)
        if x is None or y is None:
            continue
        beyond["total"] += 1
        if x < x_lo:
            beyond["left"] += 1
            continue
        if x > x_hi:
            beyond["right"] += 1
            continue
        if y > y_hi:
            beyond["above"] += 1
            continue
        if y < y_lo:
            beyond["below"] += 1
            continue
        points.append(_Point(x=x, y=y, x_raw=xv, y_raw=yv, series=sv, row_index=i))
    points.sort(key=lambda p: (p.series or "", p.x, p.row_index))
    return points, beyond


def _series_order(points: list[_Point], chart: LoadedChart) -> list[str | None]:
    if chart.spec.series is None:
        return [None]
    order: list[str | None] = []
    for v in chart.table.column(chart.spec.series.field):
        if v is not None and v not in order:
            order.append(v)
    if len(order) > MAX_SERIES:
        raise TooManySeriesError(
            f"{len(order)} series exceed the {MAX_SERIES} available textures"
        )
    return order or [None]


def _datum_label(p: _Point, chart: LoadedChart) -> str:
    x_txt = p.x_raw.label if isinstance(p.x_raw, TemporalValue) else format_value(p.x_raw)
    y_txt = format_value(p.y_raw) + chart.spec.y.unit
    if p.series is not None:
        return f"{p.series} {x_txt} {y_txt}"
    return f"{x_txt} {y_txt}"


def _bresenham(a: tuple[int, int], b: tuple[int, int]) -> list[tuple[int, int]]:
    """Cells strictly between a and b on the integer segment."""
    (x0, y0), (x1, y1) = a, b
    cells = []
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        if (x, y) != a and (x, y) != b:
            cells.append((x, y))
        if (x, y) == (x1, y1):
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
    return cells


def render(chart: LoadedChart, viewport: ViewportState, frame_id: int = 0) -> TactileFrame:
    """Render one frame; pure in (chart, viewport, frame_id)."""
    spec = chart.spec
    fb = FrameBuilder()
    points, beyond = _visible_points(chart, viewport)
    series_order = _series_order(points, chart)
    (x_lo, x_hi), (y_lo, y_hi) = viewport.x_window, viewport.y_window

    # axis lines
    for row in range(PLOT_TOP, X_AXIS_ROW + 1):
        fb.raise_pin(Y_AXIS_COL, row, Marker.Y_AXIS)
    for col in range(Y_AXIS_COL, PLOT_RIGHT + 1):
        fb.raise_pin(col, X_AXIS_ROW, Marker.X_AXIS)

    # zero line inside the window
    zero_row = None
    if y_lo <= 0.0 <= y_hi:
        _, zero_row = map_to_grid(x_lo, 0.0, viewport.x_window, viewport.y_window)
        for col in range(PLOT_LEFT, PLOT_RIGHT + 1):
            fb.raise_pin(col, zero_row, Marker.ZERO_LINE)

    elements: list[ChartElement] = []
    elements += _draw_ticks(fb, chart, viewport)

    datum_elements, dropped = _draw_data(fb, chart, viewport, points, series_order, zero_row)
    elements = datum_elements + elements  # data first for stable id ordering

    elements += _axis_elements(chart)
    _draw_scroll_bars(fb, beyond)

    if spec.mark == "point":
        _suppress_halo(fb, datum_elements)

    fb.elements = elements
    pages = _frame_braille_pages(chart)
    return fb.freeze(
        frame_id=frame_id,
        braille_pages=pages,
        empty_viewport=not points,
        dropped_data=dropped,
    )


def _draw_ticks(fb: FrameBuilder, chart: LoadedChart, viewport: ViewportState) -> list[ChartElement]:
    spec = chart.spec
    elements = []
    (x_lo, x_hi), (y_lo, y_hi) = viewport.x_window, viewport.y_window

    # x ticks: temporal/ordinal use in-window data positions; quantitative
    # uses round values
    if spec.x.type == "quantitative":
        tick_xs = [(v, format_value(v) + spec.x.unit) for v in nice_ticks(x_lo, x_hi, MAX_X_TICKS)]
    else:
        cats = None
        if spec.x.type in ("ordinal", "nominal"):
            cats = category_order(chart.table, spec.x.field, spec.x.scale)
        table = chart.layer_table(viewport.active_layer)
        seen: dict[float, str] = {}
        for v in table.column(spec.x.field):
            n = numeric_value(v, cats)
            if n is None or not x_lo <= n <= x_hi or n in seen:
                continue
            seen[n] = v.label if isinstance(v, TemporalValue) else str(v)
        tick_xs = _thin(sorted(seen.items()), MAX_X_TICKS)

    used_cols = set()
    for i, (x, label) in enumerate(tick_xs):
        col, _ = map_to_grid(x, y_lo, viewport.x_window, viewport.y_window)
        if col in used_cols:
            continue
        used_cols.add(col)
        fb.raise_pin(col, X_TICK_ROW, Marker.X_AXIS)
        elements.append(
            ChartElement(
                element_id=f"tx{i:03d}",
                kind="axis_tick",
                grid_position=(col, X_TICK_ROW),
                footprint=frozenset({(col, X_TICK_ROW)}),
                label=f"x axis {label}",
            )
        )

    used_rows = set()
    for i, v in enumerate(nice_ticks(y_lo, y_hi, MAX_Y_TICKS)):
        _, row = map_to_grid(x_lo, v, viewport.x_window, viewport.y_window)
        if row in used_rows:
            continue
        used_rows.add(row)
        fb.raise_pin(Y_TICK_COL, row, Marker.Y_AXIS)
        elements.append(
            ChartElement(
                element_id=f"ty{i:03d}",
                kind="axis_tick",
                grid_position=(Y_TICK_COL, row),
                footprint=frozenset({(Y_TICK_COL, row)}),
                label=f"y axis {format_value(v)}{spec.y.unit}",
            )
        )
    return elements


def _axis_elements(chart: LoadedChart) -> list[ChartElement]:
    spec = chart.spec
    x_cells = frozenset((col, X_AXIS_ROW) for col in range(Y_AXIS_COL, PLOT_RIGHT + 1))
    y_cells = frozenset((Y_AXIS_COL, row) for row in range(PLOT_TOP, X_AXIS_ROW + 1))
    return [
        ChartElement(
            element_id="ax_x",
            kind="axis_label",
            grid_position=((Y_AXIS_COL + PLOT_RIGHT) // 2, X_AXIS_ROW),
            footprint=x_cells,
            label=f"x axis {spec.x.field}",
        ),
        ChartElement(
            element_id="ax_y",
            kind="axis_label",
            grid_position=(Y_AXIS_COL, (PLOT_TOP + X_AXIS_ROW) // 2),
            footprint=y_cells,
            label=f"y axis {spec.y.field}"
            + (f" {spec.y.unit}" if spec.y.unit else ""),
        ),
    ]


def _draw_data(
    fb: FrameBuilder,
    chart: LoadedChart,
    viewport: ViewportState,
    points: list[_Point],
    series_order: list,
    zero_row: int | None,
) -> tuple[list[ChartElement], int]:
    spec = chart.spec
    elements: list[ChartElement] = []
    owned: set[tuple[int, int]] = set()
    dropped = 0
    next_id = 0

    def texture_index(series) -> int:
        return series_order.index(series) if series in series_order else 0

    if spec.mark == "bar":
        for p in points:
            col, row = map_to_grid(p.x, p.y, viewport.x_window, viewport.y_window)
            if (col, row) in owned:
                dropped += 1
                continue
            base_row = zero_row if zero_row is not None else PLOT_BOTTOM
            lo_row, hi_row = min(row, base_row), max(row, base_row)
            fill = _FILL_PATTERNS[texture_index(p.series)]
            cells = set()
            for c in (col, col + 1):
                if c > PLOT_RIGHT:
                    continue
                for r in range(lo_row, hi_row + 1):
                    if (c, r) in owned:
                        continue
                    cells.add((c, r))
            if (col, row) not in cells:
                dropped += 1
                continue
            for c, r in cells:
                fb.set_marker(c, r, Marker.DATA_POINT)
                if fill(c, r) or r == row:  # value edge always raised
                    fb.raise_pin(c, r, Marker.DATA_POINT)
                else:
                    fb.lower_pin(c, r)
            owned |= cells
            elements.append(
                ChartElement(
                    element_id=f"d{next_id:03d}",
                    kind="datum",
                    grid_position=(col, row),
                    footprint=frozenset(cells),
                    label=_datum_label(p, chart),
                    datum=(p.x_raw, p.y_raw, p.series),
                )
            )
            next_id += 1
        return elements, dropped

    # line and point marks: one cell per datum
    per_series: dict[object, list[tuple[tuple[int, int], _Point]]] = {}
    for p in points:
        cell = map_to_grid(p.x, p.y, viewport.x_window, viewport.y_window)
        per_series.setdefault(p.series, []).append((cell, p))

    for series in series_order:
        if series not in per_series:
            continue
        vertices = []
        for cell, p in per_series[series]:
            if cell in owned:
                dropped += 1
                vertices.append(cell)  # segment still routes through the cell
                continue
            owned.add(cell)
            fb.raise_pin(*cell, Marker.DATA_POINT)
            elements.append(
                ChartElement(
                    element_id=f"d{next_id:03d}",
                    kind="datum",
                    grid_position=cell,
                    footprint=frozenset({cell}),
                    label=_datum_label(p, chart),
                    datum=(p.x_raw, p.y_raw, p.series),
                )
            )
            next_id += 1
            vertices.append(cell)
        if spec.mark == "line":
            pattern = _SEGMENT_PATTERNS[texture_index(series)]
            step = 0
            for a, b in zip(vertices, vertices[1:]):
                for cell in _bresenham(a, b):
                    step += 1
                    if fb.marker(*cell) != Marker.BACKGROUND:
                        continue  # never overwrite data/axis/zero-line cells
                    if pattern(step):
                        fb.raise_pin(*cell, Marker.BACKGROUND)
                        fb.texture_cells.add(cell)
    return elements, dropped


def _draw_scroll_bars(fb: FrameBuilder, beyond: dict) -> None:
    total = beyond["total"] or 1
    half_w = PLOT_WIDTH // 2
    half_h = PLOT_HEIGHT // 2
    if beyond["left"]:
        length = max(1, round_half_away(beyond["left"] / total * half_w))
        for c in range(PLOT_LEFT, PLOT_LEFT + length):
            fb.raise_pin(c, H_SCROLL_ROW, Marker.SCROLL_BAR)
    if beyond["right"]:
        length = max(1, round_half_away(beyond["right"] / total * half_w))
        for c in range(PLOT_RIGHT - length + 1, PLOT_RIGHT + 1):
            fb.raise_pin(c, H_SCROLL_ROW, Marker.SCROLL_BAR)
    if beyond["above"]:
        length = max(1, round_half_away(beyond["above"] / total * half_h))
        for r in range(PLOT_TOP, PLOT_TOP + length):
            fb.raise_pin(V_SCROLL_COL, r, Marker.SCROLL_BAR)
    if beyond["below"]:
        length = max(1, round_half_away(beyond["below"] / total * half_h))
        for r in range(PLOT_BOTTOM - length + 1, PLOT_BOTTOM + 1):
            fb.raise_pin(V_SCROLL_COL, r, Marker.SCROLL_BAR)


def _suppress_halo(fb: FrameBuilder, datum_elements: list[ChartElement]) -> None:
    """Keep a one-cell lowered ring around point marks; axes and scroll
    strips are left alone."""
    datum_cells = {e.grid_position for e in datum_elements}
    for col, row in datum_cells:
        for dc in (-1, 0, 1):
            for dr in (-1, 0, 1):
                if dc == dr == 0:
                    continue
                c, r = col + dc, row + dr
                if not fb.in_bounds(c, r) or (c, r) in datum_cells:
                    continue
                if fb.marker(c, r) in (Marker.ZERO_LINE, Marker.BACKGROUND) and fb.pin(c, r):
                    fb.lower_pin(c, r)


def _frame_braille_pages(chart: LoadedChart) -> list[tuple[int, ...]]:
    """Title page(s) then one page run per axis label."""
    pages: list[tuple[int, ...]] = []
    if chart.spec.title:
        pages += braille.pages_for_text(chart.spec.title)
    pages += braille.pages_for_text(f"x {chart.spec.x.field}")
    y_text = f"y {chart.spec.y.field}"
    if chart.spec.y.unit:
        y_text += f" {chart.spec.y.unit}"
    pages += braille.pages_for_text(y_text)
    return pages
