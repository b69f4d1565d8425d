"""Six-dot Braille translation against the cell table shipped in data/.

The device's label line holds 20 cells; a "page" is one such line. Text is
case-folded before translation (the table is uncontracted and unicase);
digit runs get a single number-sign prefix, with a decimal point inside a
run staying in the run. Characters missing from the table translate to a
blank cell.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

LINE_CELLS = 20


@lru_cache(maxsize=1)
def _load_table() -> dict:
    raw = resources.files("feelgrid.data").joinpath("braille6.json").read_text("utf-8")
    return json.loads(raw)


def cell_for(char: str) -> int | None:
    """Single-character lookup; digits return their letter-cell without the
    number sign (callers handle runs)."""
    table = _load_table()
    c = char.lower()
    if c in table["letters"]:
        return table["letters"][c]
    if c in table["digits"]:
        return table["digits"][c]
    if c in table["symbols"]:
        return table["symbols"][c]
    return None


def translate(text: str) -> list[int]:
    """Translate text to a flat cell list (no paging)."""
    table = _load_table()
    cells: list[int] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isdigit():
            # one number sign per maximal digit run; '.' between digits
            # stays inside the run
            cells.append(table["number_sign"])
            while i < n:
                ch = text[i]
                if ch.isdigit():
                    cells.append(table["digits"][ch])
                    i += 1
                elif ch == "." and i + 1 < n and text[i + 1].isdigit():
                    cells.append(table["symbols"]["."])
                    i += 1
                else:
                    break
            continue
        mapped = cell_for(ch)
        cells.append(0 if mapped is None else mapped)
        i += 1
    return cells


def paginate(cells: list[int], width: int = LINE_CELLS) -> list[tuple[int, ...]]:
    """Split a cell list into device-line pages of at most ``width`` cells."""
    if not cells:
        return []
    return [tuple(cells[i : i + width]) for i in range(0, len(cells), width)]


def pages_for_text(text: str) -> list[tuple[int, ...]]:
    return paginate(translate(text))
