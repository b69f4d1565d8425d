"""Declarative chart grammar: parsing, validation, serialization, loading.

The supported subset is deliberately closed: marks line/bar/point, channels
x/y/series (series standing in for color), the four transform kinds, inline
values or a CSV file reference, and an optional resolution hierarchy
declaration. Everything outside the subset is a hard error; unknown
top-level keys are ignored with a recorded warning.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import (
    MissingFieldError,
    SchemaMismatchError,
    SpecSyntaxError,
    TypeCoercionError,
    UnsupportedMarkError,
)
from .table import FIELD_TYPES, DataTable, table_from_csv, table_from_records
from .temporal import TIME_UNITS
from .transforms import (
    ResolutionLayer,
    TransformSpec,
    apply_transforms,
    build_hierarchy,
    parse_transform_json,
    schema_after_transforms,
    transform_to_json,
)

MARKS = ("line", "bar", "point")

# Standard chart-spec boilerplate that carries no meaning on a pin grid.
_IGNORED_KEYS = {"$schema", "width", "height", "description", "title", "config", "background"}
_KNOWN_KEYS = {"name", "mark", "encoding", "transform", "data", "resolution"} | _IGNORED_KEYS


@dataclass(frozen=True)
class FieldDef:
    field: str
    type: str  # quantitative | temporal | ordinal | nominal
    scale: tuple | None = None  # (lo, hi) for quantitative, tuple of categories otherwise
    unit: str = ""  # measurement unit suffix, e.g. "%"

    def __post_init__(self):
        if self.type not in FIELD_TYPES:
            raise SchemaMismatchError(f"unknown field type {self.type!r}")
        if self.type == "quantitative" and self.scale is not None:
            lo, hi = self.scale
            if not lo < hi:
                raise SchemaMismatchError(f"scale domain needs min < max, got {self.scale}")


@dataclass(frozen=True)
class DataRef:
    """Inline rows or a sibling CSV file; ``base`` anchors relative urls."""

    values: tuple | None = None
    url: str | None = None
    base: Path | None = None

    def resolve_path(self) -> Path:
        if self.url is None:
            raise ValueError("data ref has no url")
        p = Path(self.url)
        if not p.is_absolute() and self.base is not None:
            p = self.base / p
        return p


@dataclass(frozen=True)
class ResolutionDecl:
    units: tuple[str, ...]  # coarse -> fine
    op: str = "mean"
    field: str | None = None  # defaults to the y encoding's field


@dataclass(frozen=True)
class ChartSpec:
    name: str
    mark: str
    x: FieldDef
    y: FieldDef
    series: FieldDef | None = None
    transforms: tuple[TransformSpec, ...] = ()
    data: DataRef = field(default_factory=DataRef)
    resolution: ResolutionDecl | None = None
    title: str = ""
    warnings: tuple[str, ...] = ()


def _parse_field_def(obj, channel: str) -> FieldDef:
    if not isinstance(obj, dict) or "field" not in obj:
        raise MissingFieldError(f"channel {channel!r} needs a field name")
    ftype = obj.get("type", "nominal")
    scale = None
    if "scale" in obj and isinstance(obj["scale"], dict) and "domain" in obj["scale"]:
        scale = tuple(obj["scale"]["domain"])
    return FieldDef(field=obj["field"], type=ftype, scale=scale, unit=obj.get("unit", ""))


def parse_spec(data: bytes | str, name: str | None = None, base: Path | None = None) -> ChartSpec:
    """Parse and validate one chart spec from its JSON surface form."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(f"malformed spec: {exc}") from exc
    if not isinstance(obj, dict):
        raise SpecSyntaxError("spec must be a JSON object")

    warnings = tuple(
        f"ignored unknown key {key!r}" for key in sorted(obj) if key not in _KNOWN_KEYS
    )

    mark = obj.get("mark")
    if isinstance(mark, dict):
        mark = mark.get("type")
    if mark is None:
        raise MissingFieldError("spec has no mark")
    if mark not in MARKS:
        raise UnsupportedMarkError(f"mark {mark!r} is outside the supported set {MARKS}")

    encoding = obj.get("encoding", {})
    if "x" not in encoding or "y" not in encoding:
        raise MissingFieldError("encoding needs both x and y channels")
    x = _parse_field_def(encoding["x"], "x")
    y = _parse_field_def(encoding["y"], "y")
    series = None
    series_key = "series" if "series" in encoding else ("color" if "color" in encoding else None)
    if series_key:
        series = _parse_field_def(encoding[series_key], series_key)
        if series.type not in ("nominal", "ordinal"):
            raise SchemaMismatchError("series channel must be nominal or ordinal")
    unsupported = set(encoding) - {"x", "y", "series", "color"}
    if unsupported:
        raise SchemaMismatchError(f"unsupported encoding channels: {sorted(unsupported)}")

    try:
        transforms = tuple(parse_transform_json(t) for t in obj.get("transform", []))
    except (ValueError, KeyError, TypeError) as exc:
        raise SpecSyntaxError(f"bad transform: {exc}") from exc

    data_obj = obj.get("data", {})
    # inline rows keep their key order (it decides column order downstream)
    ref = DataRef(
        values=tuple(json.dumps(v) for v in data_obj.get("values", []))
        if "values" in data_obj
        else None,
        url=data_obj.get("url"),
        base=base,
    )
    if ref.values is None and ref.url is None:
        raise MissingFieldError("data needs inline values or a url")

    resolution = None
    if "resolution" in obj:
        r = obj["resolution"]
        units = tuple(r.get("units", ()))
        bad = [u for u in units if u not in TIME_UNITS]
        if bad or not units:
            raise SpecSyntaxError(f"resolution units must be drawn from {TIME_UNITS}, got {units}")
        resolution = ResolutionDecl(units=units, op=r.get("op", "mean"), field=r.get("field"))

    spec = ChartSpec(
        name=obj.get("name", name or ""),
        mark=mark,
        x=x,
        y=y,
        series=series,
        transforms=transforms,
        data=ref,
        resolution=resolution,
        title=obj.get("title", ""),
        warnings=warnings,
    )
    _validate_schema(spec)
    return spec


def _inline_records(ref: DataRef) -> list[dict]:
    return [json.loads(v) for v in ref.values or ()]


def _validate_schema(spec: ChartSpec) -> None:
    """Check encodings against the post-transform data schema.

    File-referenced data is validated at load time instead, since the file
    is not read during parsing.
    """
    if spec.data.values is None:
        return
    records = _inline_records(spec.data)
    if not records:
        return
    names = []
    for rec in records:
        for key in rec:
            if key not in names:
                names.append(key)
    schema = {n: "nominal" for n in names}
    for fd in (spec.x, spec.y, spec.series):
        if fd is not None and fd.field in schema:
            schema[fd.field] = fd.type
    schema = schema_after_transforms(schema, spec.transforms)
    for channel, fd in (("x", spec.x), ("y", spec.y), ("series", spec.series)):
        if fd is None:
            continue
        if fd.field not in schema:
            raise SchemaMismatchError(
                f"{channel} references column {fd.field!r} absent after transforms "
                f"(have {sorted(schema)})"
            )


def serialize_spec(spec: ChartSpec) -> str:
    """Serialize back to the JSON surface form (inverse of parse_spec)."""

    def field_json(fd: FieldDef) -> dict:
        out: dict = {"field": fd.field, "type": fd.type}
        if fd.scale is not None:
            out["scale"] = {"domain": list(fd.scale)}
        if fd.unit:
            out["unit"] = fd.unit
        return out

    obj: dict = {
        "name": spec.name,
        "mark": spec.mark,
        "encoding": {"x": field_json(spec.x), "y": field_json(spec.y)},
    }
    if spec.title:
        obj["title"] = spec.title
    if spec.series is not None:
        obj["encoding"]["series"] = field_json(spec.series)
    if spec.transforms:
        obj["transform"] = [transform_to_json(t) for t in spec.transforms]
    if spec.data.values is not None:
        obj["data"] = {"values": [json.loads(v) for v in spec.data.values]}
    else:
        obj["data"] = {"url": spec.data.url}
    if spec.resolution is not None:
        r: dict = {"units": list(spec.resolution.units), "op": spec.resolution.op}
        if spec.resolution.field:
            r["field"] = spec.resolution.field
        obj["resolution"] = r
    # no key sorting: inline record key order doubles as column order
    return json.dumps(obj, indent=2)


def load_table(ref: DataRef, types: dict[str, str] | None = None) -> DataTable:
    """Load the referenced data as a typed table.

    ``types`` carries expected column types from the chart's encodings;
    remaining columns are sniffed from their values.
    """
    if ref.values is not None:
        return table_from_records(_inline_records(ref), types)
    path = ref.resolve_path()
    if not path.exists():
        raise OSError(f"data file not found: {path}")
    if path.suffix.lower() != ".csv":
        raise TypeCoercionError(f"unsupported data file type: {path.suffix!r}")
    return table_from_csv(path, types)


@dataclass(frozen=True)
class LoadedChart:
    """A chart ready to render: spec, post-transform table, optional layers."""

    spec: ChartSpec
    table: DataTable
    layers: tuple[ResolutionLayer, ...] = ()

    def layer_table(self, layer_id: str | None) -> DataTable:
        if layer_id is None:
            return self.table
        for layer in self.layers:
            if layer.layer_id == layer_id:
                return layer.table
        return self.table


def encoding_types(spec: ChartSpec) -> dict[str, str]:
    types = {spec.x.field: spec.x.type, spec.y.field: spec.y.type}
    if spec.series is not None:
        types[spec.series.field] = spec.series.type
    return types


def load_chart(spec: ChartSpec) -> LoadedChart:
    """Load data, apply declared transforms, and build any resolution layers."""
    base = load_table(spec.data, encoding_types(spec))
    table = apply_transforms(base, spec.transforms)
    # encodings must exist in the schema the transforms produce
    for channel, fd in (("x", spec.x), ("y", spec.y), ("series", spec.series)):
        if fd is not None and fd.field not in table.column_names():
            raise SchemaMismatchError(f"{channel} references column {fd.field!r} not in data")
    layers: tuple[ResolutionLayer, ...] = ()
    if spec.resolution is not None:
        layers = tuple(
            build_hierarchy(
                table,
                spec.resolution.units,
                spec.resolution.op,
                spec.resolution.field or spec.y.field,
                spec.x.field,
            )
        )
    return LoadedChart(spec=spec, table=table, layers=layers)


def with_base(spec: ChartSpec, base: Path) -> ChartSpec:
    return replace(spec, data=replace(spec.data, base=base))
