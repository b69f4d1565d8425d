"""Tactile frames: pin buffer, per-cell semantic markers, element index.

Pins pack row-major into 300 bytes (60x40 bits, MSB = leftmost pin of each
8-pin group), matching the device protocol's FULL_FRAME payload. The
semantic buffer holds one marker byte per cell.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import IntEnum

WIDTH = 60
HEIGHT = 40
# 60 pins per row do not byte-align; pins pack row-major across the whole
# grid: bit index = row*60 + col, 2400 bits = 300 bytes.
FRAME_BYTES = WIDTH * HEIGHT // 8


class Marker(IntEnum):
    BACKGROUND = 0
    X_AXIS = 1
    Y_AXIS = 2
    DATA_POINT = 3
    ZERO_LINE = 4
    SCROLL_BAR = 5


MARKER_CHARS = {
    Marker.BACKGROUND: ".",
    Marker.X_AXIS: "x",
    Marker.Y_AXIS: "y",
    Marker.DATA_POINT: "d",
    Marker.ZERO_LINE: "z",
    Marker.SCROLL_BAR: "s",
}


@dataclass(frozen=True)
class ChartElement:
    element_id: str
    kind: str  # datum | axis_tick | axis_label
    grid_position: tuple[int, int]  # (col, row)
    footprint: frozenset[tuple[int, int]]
    label: str
    datum: tuple | None = None  # (x value, y value, series) for kind == datum


def bit_index(col: int, row: int) -> int:
    return row * WIDTH + col


class FrameBuilder:
    """Mutable scratch space the renderer draws into before freezing."""

    def __init__(self):
        self.pins = bytearray(FRAME_BYTES)
        self.markers = bytearray(WIDTH * HEIGHT)
        self.elements: list[ChartElement] = []
        self.texture_cells: set[tuple[int, int]] = set()

    def in_bounds(self, col: int, row: int) -> bool:
        return 0 <= col < WIDTH and 0 <= row < HEIGHT

    def raise_pin(self, col: int, row: int, marker: Marker | None = None):
        if not self.in_bounds(col, row):
            return
        i = bit_index(col, row)
        self.pins[i // 8] |= 0x80 >> (i % 8)
        if marker is not None:
            self.markers[i] = int(marker)

    def lower_pin(self, col: int, row: int):
        if not self.in_bounds(col, row):
            return
        i = bit_index(col, row)
        self.pins[i // 8] &= ~(0x80 >> (i % 8)) & 0xFF

    def pin(self, col: int, row: int) -> bool:
        i = bit_index(col, row)
        return bool(self.pins[i // 8] & (0x80 >> (i % 8)))

    def marker(self, col: int, row: int) -> Marker:
        return Marker(self.markers[bit_index(col, row)])

    def set_marker(self, col: int, row: int, marker: Marker):
        if self.in_bounds(col, row):
            self.markers[bit_index(col, row)] = int(marker)

    def freeze(
        self,
        frame_id: int,
        braille_pages: list[tuple[int, ...]],
        empty_viewport: bool = False,
        dropped_data: int = 0,
    ) -> "TactileFrame":
        return TactileFrame(
            pins=bytes(self.pins),
            semantic=bytes(self.markers),
            element_index=tuple(self.elements),
            braille_pages=tuple(braille_pages),
            frame_id=frame_id,
            texture_cells=frozenset(self.texture_cells),
            empty_viewport=empty_viewport,
            dropped_data=dropped_data,
        )


@dataclass(frozen=True)
class TactileFrame:
    pins: bytes  # 300 bytes, row-major, MSB first
    semantic: bytes  # 2400 marker bytes
    element_index: tuple[ChartElement, ...]
    braille_pages: tuple[tuple[int, ...], ...]
    frame_id: int
    texture_cells: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    empty_viewport: bool = False
    dropped_data: int = 0

    width: int = WIDTH
    height: int = HEIGHT

    def pin(self, col: int, row: int) -> bool:
        i = bit_index(col, row)
        return bool(self.pins[i // 8] & (0x80 >> (i % 8)))

    def marker(self, col: int, row: int) -> Marker:
        return Marker(self.semantic[bit_index(col, row)])

    def data_elements(self) -> list[ChartElement]:
        return [e for e in self.element_index if e.kind == "datum"]

    def element(self, element_id: str) -> ChartElement | None:
        for e in self.element_index:
            if e.element_id == element_id:
                return e
        return None

    def digest(self) -> str:
        return hashlib.sha256(self.pins + self.semantic).hexdigest()

    def render_text(self) -> str:
        """Dump format for golden tests: a `#`/`.` pin grid, a blank line,
        then the semantic map with one code letter per cell."""
        pin_lines = [
            "".join("#" if self.pin(c, r) else "." for c in range(WIDTH)) for r in range(HEIGHT)
        ]
        marker_lines = [
            "".join(MARKER_CHARS[self.marker(c, r)] for c in range(WIDTH)) for r in range(HEIGHT)
        ]
        return "\n".join(pin_lines) + "\n\n" + "\n".join(marker_lines) + "\n"

    def validate(self) -> None:
        """Assert the frame's structural invariants (used by tests)."""
        owners: dict[tuple[int, int], str] = {}
        for e in self.element_index:
            if e.kind != "datum":
                continue
            for cell in e.footprint:
                if cell in owners:
                    raise AssertionError(f"cell {cell} in two datum footprints")
                owners[cell] = e.element_id
        for row in range(HEIGHT):
            for col in range(WIDTH):
                m = self.marker(col, row)
                if m == Marker.DATA_POINT and (col, row) not in owners:
                    raise AssertionError(f"data_point cell ({col},{row}) has no owner element")
                if self.pin(col, row) and m == Marker.BACKGROUND:
                    if (col, row) not in self.texture_cells:
                        raise AssertionError(
                            f"raised background pin at ({col},{row}) outside texture fill"
                        )
