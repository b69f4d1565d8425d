from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from feelgrid.errors import ExpressionError
from feelgrid.expr import eval_expression
from feelgrid.temporal import parse_temporal


def test_arithmetic_identity():
    assert eval_expression("(a+b)*2", {"a": 1, "b": 2}) == 6


def test_comparison_boundary_inclusive():
    assert eval_expression("interest >= 0.25", {"interest": 0.25}) is True
    assert eval_expression("interest > 0.25", {"interest": 0.25}) is False


def test_division_by_zero_is_error_not_infinity():
    with pytest.raises(ExpressionError):
        eval_expression("1/0", {})
    with pytest.raises(ExpressionError):
        eval_expression("a/b", {"a": 1, "b": 0})


def test_error_carries_source_span():
    with pytest.raises(ExpressionError) as err:
        eval_expression("1 + $", {})
    start, end = err.value.span
    assert "1 + $"[start:end] == "$"


def test_unknown_column_is_expression_error():
    with pytest.raises(ExpressionError):
        eval_expression("missing + 1", {"present": 1})


def test_boolean_operators():
    row = {"a": 1, "b": 0}
    assert eval_expression("a > 0 and not (b > 0)", row) is True
    assert eval_expression("a > 2 or b == 0", row) is True


def test_temporal_string_comparison():
    row = {"quarter": parse_temporal("2021-Q3")}
    assert eval_expression("quarter >= '2020-Q2'", row) is True
    assert eval_expression("quarter < '2021-Q1'", row) is False


def test_datum_prefix_is_alias():
    assert eval_expression("datum.x * 2", {"x": 21}) == 42


def test_null_semantics():
    assert eval_expression("a + 1", {"a": None}) is None
    assert eval_expression("a > 0", {"a": None}) is False
    assert eval_expression("not a", {"a": None}) is True


def test_string_literals_compare():
    assert eval_expression("city == 'Arden'", {"city": "Arden"}) is True
    assert eval_expression('city != "Esk"', {"city": "Arden"}) is True


@given(
    st.integers(min_value=-1000, max_value=1000),
    st.integers(min_value=-1000, max_value=1000),
)
def test_addition_matches_python(a, b):
    assert eval_expression("a + b", {"a": a, "b": b}) == a + b


@given(st.floats(allow_nan=False, allow_infinity=False, width=32))
def test_unary_negation(x):
    assert eval_expression("-x", {"x": x}) == -x


def test_operator_precedence():
    assert eval_expression("1 + 2 * 3", {}) == 7
    assert eval_expression("2 * 3 + 1", {}) == 7
    assert eval_expression("-(1 + 2)", {}) == -3
