"""Data transformations: aggregate, calculate, filter, jitter, and the
multi-resolution aggregation hierarchy behind semantic zoom.

All transforms are pure: they take a table and return a new table. Buckets
for time units are calendar-aligned (ISO weeks, calendar months/quarters/
years). Nulls are excluded from aggregates; count counts non-null values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    ExpressionError,
    NonTemporalGroupByError,
    UnknownColumnError,
)
from .expr import eval_node, parse_expression
from .table import Column, DataTable, sniff_type
from .temporal import TIME_UNITS, TemporalValue, bucket

AGGREGATE_OPS = ("mean", "sum", "min", "max", "count")


@dataclass(frozen=True)
class Aggregate:
    """Group rows and fold one field; the folded value keeps its field name."""

    op: str
    field: str
    groupby: tuple[str, ...]
    time_unit: str | None = None


@dataclass(frozen=True)
class Calculate:
    expression: str
    output: str


@dataclass(frozen=True)
class Filter:
    predicate: str


@dataclass(frozen=True)
class Jitter:
    """Deterministic pseudo-random offsets; a seed is mandatory so renders
    reproduce bit for bit."""

    field: str
    amplitude: float
    seed: int


TransformSpec = Aggregate | Calculate | Filter | Jitter


@dataclass(frozen=True)
class ResolutionLayer:
    layer_id: str
    time_unit: str
    table: DataTable

    @property
    def point_count(self) -> int:
        return self.table.row_count


def transform_output_schema(schema: dict[str, str], transform: TransformSpec) -> dict[str, str]:
    """Column schema produced by one transform (name -> type)."""
    if isinstance(transform, Aggregate):
        out: dict[str, str] = {}
        for name in transform.groupby:
            if name not in schema:
                raise UnknownColumnError(f"aggregate groupby column {name!r} not in schema")
            out[name] = schema[name]
        if transform.field not in schema:
            raise UnknownColumnError(f"aggregate field {transform.field!r} not in schema")
        out[transform.field] = "quantitative"
        return out
    if isinstance(transform, Calculate):
        out = dict(schema)
        out[transform.output] = "quantitative"
        return out
    # Filter and Jitter preserve the schema.
    return dict(schema)


def schema_after_transforms(schema: dict[str, str], transforms) -> dict[str, str]:
    for t in transforms:
        schema = transform_output_schema(schema, t)
    return schema


def apply_transforms(table: DataTable, transforms) -> DataTable:
    """Apply transforms in declaration order; the input table is unmodified."""
    for t in transforms:
        table = apply_transform(table, t)
    return table


def apply_transform(table: DataTable, transform: TransformSpec) -> DataTable:
    if isinstance(transform, Aggregate):
        return _apply_aggregate(table, transform)
    if isinstance(transform, Calculate):
        return _apply_calculate(table, transform)
    if isinstance(transform, Filter):
        return _apply_filter(table, transform)
    if isinstance(transform, Jitter):
        return _apply_jitter(table, transform)
    raise TypeError(f"unknown transform {transform!r}")


def _group_key_sort(key):
    # Rows sort by the group key; TemporalValue orders by ordinal.
    out = []
    for v in key:
        if isinstance(v, TemporalValue):
            out.append((0, v.ordinal, v.label))
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            out.append((1, float(v), ""))
        else:
            out.append((2, 0.0, str(v)))
    return tuple(out)


def fold(op: str, values: list) -> int | float | None:
    """Fold non-null values with one aggregate op; empty folds yield null
    (count yields 0)."""
    vals = [v for v in values if v is not None]
    if op == "count":
        return len(vals)
    if not vals:
        return None
    if op == "sum":
        return sum(vals)
    if op == "mean":
        return sum(vals) / len(vals)
    if op == "min":
        return min(vals)
    if op == "max":
        return max(vals)
    raise ValueError(f"unknown aggregate op {op!r}")


def _apply_aggregate(table: DataTable, agg: Aggregate) -> DataTable:
    if agg.op not in AGGREGATE_OPS:
        raise ValueError(f"unknown aggregate op {agg.op!r}")
    group_idx = [table.column_index(name) for name in agg.groupby]
    field_idx = table.column_index(agg.field)

    def key_of(row):
        key = []
        for name, idx in zip(agg.groupby, group_idx):
            v = row[idx]
            if agg.time_unit and isinstance(v, TemporalValue):
                v = bucket(v, agg.time_unit)
            key.append(v)
        return tuple(key)

    groups: dict[tuple, list] = {}
    for row in table.rows:
        groups.setdefault(key_of(row), []).append(row[field_idx])

    columns = tuple(
        [Column(name, table.column_type(name)) for name in agg.groupby]
        + [Column(agg.field, "quantitative")]
    )
    rows = []
    for key in sorted(groups, key=_group_key_sort):
        rows.append(tuple(list(key) + [fold(agg.op, groups[key])]))
    return DataTable(columns, tuple(rows))


def _apply_calculate(table: DataTable, calc: Calculate) -> DataTable:
    ast = parse_expression(calc.expression)
    values = [eval_node(ast, table.row_dict(i)) for i in range(table.row_count)]
    out_type = sniff_type(values)
    if calc.output in table.column_names():
        idx = table.column_index(calc.output)
        columns = list(table.columns)
        columns[idx] = Column(calc.output, out_type)
        rows = [tuple(list(r[:idx]) + [v] + list(r[idx + 1 :])) for r, v in zip(table.rows, values)]
    else:
        columns = list(table.columns) + [Column(calc.output, out_type)]
        rows = [tuple(list(r) + [v]) for r, v in zip(table.rows, values)]
    return DataTable(tuple(columns), tuple(rows))


def _truthy(v) -> bool:
    return bool(v) if not isinstance(v, TemporalValue) else True


def _apply_filter(table: DataTable, flt: Filter) -> DataTable:
    ast = parse_expression(flt.predicate)
    rows = [
        row for i, row in enumerate(table.rows) if _truthy(eval_node(ast, table.row_dict(i)))
    ]
    return table.with_rows(rows)


def _apply_jitter(table: DataTable, jit: Jitter) -> DataTable:
    if jit.amplitude < 0:
        raise ValueError("jitter amplitude must be >= 0")
    idx = table.column_index(jit.field)
    if jit.amplitude == 0:
        return table  # exact identity, no float noise
    rng = random.Random(jit.seed)
    rows = []
    for row in table.rows:
        offset = rng.uniform(-jit.amplitude, jit.amplitude)
        v = row[idx]
        new = v if v is None else v + offset
        rows.append(tuple(list(row[:idx]) + [new] + list(row[idx + 1 :])))
    return table.with_rows(rows)


def build_hierarchy(
    table: DataTable,
    units,
    op: str,
    field: str,
    groupby: str,
) -> list[ResolutionLayer]:
    """Pre-aggregate one table at several calendar resolutions.

    ``units`` must be ordered coarse to fine (a subset of TIME_UNITS order);
    the groupby column must be temporal.
    """
    if table.column_type(groupby) != "temporal":
        raise NonTemporalGroupByError(f"groupby column {groupby!r} is {table.column_type(groupby)}")
    order = [TIME_UNITS.index(u) for u in units]
    if order != sorted(order) or len(set(order)) != len(order):
        raise ValueError(f"units must be strictly coarse-to-fine, got {list(units)}")
    layers = []
    for unit in units:
        agg = Aggregate(op=op, field=field, groupby=(groupby,), time_unit=unit)
        layers.append(ResolutionLayer(layer_id=unit, time_unit=unit, table=_apply_aggregate(table, agg)))
    return layers


def parse_transform_json(obj: dict) -> TransformSpec:
    """Parse one entry of a spec's transform array."""
    if "aggregate" in obj:
        spec = obj["aggregate"]
        if isinstance(spec, list):
            if len(spec) != 1:
                raise ValueError("exactly one aggregate op per transform entry")
            spec = spec[0]
        groupby = obj.get("groupby", [])
        if isinstance(groupby, str):
            groupby = [groupby]
        return Aggregate(
            op=spec["op"],
            field=spec["field"],
            groupby=tuple(groupby),
            time_unit=obj.get("timeUnit"),
        )
    if "calculate" in obj:
        return Calculate(expression=obj["calculate"], output=obj["as"])
    if "filter" in obj:
        return Filter(predicate=obj["filter"])
    if "jitter" in obj:
        spec = obj["jitter"]
        if "seed" not in spec:
            raise ValueError("jitter requires an explicit seed")
        return Jitter(field=spec["field"], amplitude=float(spec["amplitude"]), seed=int(spec["seed"]))
    raise ValueError(f"unknown transform {sorted(obj)}")


def transform_to_json(t: TransformSpec) -> dict:
    if isinstance(t, Aggregate):
        out: dict = {"aggregate": {"op": t.op, "field": t.field}, "groupby": list(t.groupby)}
        if t.time_unit:
            out["timeUnit"] = t.time_unit
        return out
    if isinstance(t, Calculate):
        return {"calculate": t.expression, "as": t.output}
    if isinstance(t, Filter):
        return {"filter": t.predicate}
    if isinstance(t, Jitter):
        return {"jitter": {"field": t.field, "amplitude": t.amplitude, "seed": t.seed}}
    raise TypeError(f"unknown transform {t!r}")
