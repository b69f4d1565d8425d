"""Immutable columnar tables with typed columns.

Column types mirror the chart grammar's encoding types: quantitative,
temporal, ordinal, nominal. Temporal cells hold TemporalValue; quantitative
cells hold int/float; ordinal and nominal cells hold strings. Any cell may
be None (an explicit null).
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field
from pathlib import Path

from .errors import TypeCoercionError, UnknownColumnError
from .temporal import TemporalValue, is_temporal_literal, parse_temporal

FIELD_TYPES = ("quantitative", "temporal", "ordinal", "nominal")


@dataclass(frozen=True)
class Column:
    name: str
    type: str  # one of FIELD_TYPES


@dataclass(frozen=True)
class DataTable:
    columns: tuple[Column, ...]
    rows: tuple[tuple, ...] = field(default_factory=tuple)

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate column names: {names}")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(f"row {i} has {len(row)} values, expected {len(self.columns)}")

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column_index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise UnknownColumnError(f"no column named {name!r} (have {self.column_names()})")

    def column_type(self, name: str) -> str:
        return self.columns[self.column_index(name)].type

    def column(self, name: str) -> list:
        i = self.column_index(name)
        return [row[i] for row in self.rows]

    def row_dict(self, i: int) -> dict:
        return {c.name: v for c, v in zip(self.columns, self.rows[i])}

    def with_rows(self, rows) -> "DataTable":
        return DataTable(self.columns, tuple(tuple(r) for r in rows))

    def digest(self) -> str:
        """Stable content digest, used by purity checks and replay logs."""
        h = hashlib.sha256()
        for c in self.columns:
            h.update(f"{c.name}:{c.type};".encode())
        for row in self.rows:
            h.update(repr(row).encode())
        return h.hexdigest()

    def schema(self) -> list[dict]:
        return [{"name": c.name, "type": c.type} for c in self.columns]


def coerce_value(raw, col_type: str, row: int | None = None, column: str | None = None):
    """Coerce one raw cell (from JSON or CSV text) to its column type."""
    if raw is None or raw == "":
        return None
    try:
        if col_type == "quantitative":
            if isinstance(raw, bool):
                raise TypeCoercionError(f"boolean is not quantitative: {raw!r}", row, column)
            if isinstance(raw, (int, float)):
                return raw
            text = str(raw).strip()
            try:
                return int(text)
            except ValueError:
                return float(text)
        if col_type == "temporal":
            if isinstance(raw, TemporalValue):
                return raw
            return parse_temporal(str(raw))
        # ordinal / nominal
        return str(raw)
    except (ValueError, TypeError) as exc:
        raise TypeCoercionError(
            f"cannot coerce {raw!r} to {col_type} (row {row}, column {column})", row, column
        ) from exc
    except TypeCoercionError as exc:
        raise TypeCoercionError(
            f"{exc} (row {row}, column {column})", row, column
        ) from exc


def sniff_type(values) -> str:
    """Infer a column type from raw values when no encoding names it."""
    seen = [v for v in values if v is not None and v != ""]
    if not seen:
        return "nominal"
    if all(isinstance(v, bool) for v in seen):
        return "nominal"
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in seen):
        return "quantitative"
    if all(isinstance(v, str) for v in seen):
        if all(is_temporal_literal(v) for v in seen):
            return "temporal"
        if all(_is_numeric_text(v) for v in seen):
            return "quantitative"
    return "nominal"


def _is_numeric_text(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def table_from_records(records: list[dict], types: dict[str, str] | None = None) -> DataTable:
    """Build a typed table from a list of mappings (inline spec values).

    ``types`` gives expected types for columns named by encodings; other
    columns are sniffed. Column order follows first appearance.
    """
    types = dict(types or {})
    names: list[str] = []
    for rec in records:
        for key in rec:
            if key not in names:
                names.append(key)
    columns = []
    for name in names:
        col_type = types.get(name) or sniff_type([rec.get(name) for rec in records])
        columns.append(Column(name, col_type))
    rows = []
    for i, rec in enumerate(records):
        rows.append(
            tuple(coerce_value(rec.get(c.name), c.type, row=i, column=c.name) for c in columns)
        )
    return DataTable(tuple(columns), tuple(rows))


def table_from_csv(path: Path, types: dict[str, str] | None = None) -> DataTable:
    """Load a typed table from a CSV file with a header row."""
    text = Path(path).read_text(encoding="utf-8")
    return table_from_csv_text(text, types)


def table_from_csv_text(text: str, types: dict[str, str] | None = None) -> DataTable:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise TypeCoercionError("CSV has no header row")
    raw_rows = [row for row in reader if row]
    records = []
    for row in raw_rows:
        if len(row) != len(header):
            raise TypeCoercionError(f"CSV row has {len(row)} cells, header has {len(header)}")
        records.append(dict(zip(header, row)))
    # CSV cells are all text; sniffing handles numeric/temporal columns.
    return table_from_records(records, types) if records else DataTable(
        tuple(Column(name, (types or {}).get(name, "nominal")) for name in header)
    )
