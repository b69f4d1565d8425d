"""Closed expression mini-language for calculate and filter transforms.

Supported: column references (optionally prefixed ``datum.``), numeric and
string literals, ``+ - * /``, comparisons, ``and/or/not``, parentheses.
Strings compared against temporal columns are parsed as date/quarter
literals. No general code execution; evaluation is deterministic.

Null handling: arithmetic over null yields null, comparisons over null are
false, and booleans treat null as false. Division by zero is an
ExpressionError, never infinity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ExpressionError
from .temporal import TemporalValue, parse_temporal
from .errors import TypeCoercionError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+\.\d+|\d+|\.\d+)
  | (?P<string>'[^']*'|"[^"]*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)?)
  | (?P<op>==|!=|<=|>=|<|>|\+|-|\*|/|\(|\))
    """,
    re.VERBOSE,
)

_KEYWORDS = {"and", "or", "not", "true", "false", "null"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


def _tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExpressionError(f"bad character {source[pos]!r}", span=(pos, pos + 1))
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if kind == "ident" and text in _KEYWORDS:
                kind = text
            tokens.append(Token(kind, text, m.start(), m.end()))
        pos = m.end()
    return tokens


# AST nodes are tuples: ("num", v) ("str", s) ("col", name) ("bool", b) ("null",)
# ("un", op, x, span) ("bin", op, a, b, span)


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ExpressionError("unexpected end of expression", span=(len(self.source), len(self.source)))
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.take()
        if tok.kind != kind:
            raise ExpressionError(f"expected {kind}, found {tok.text!r}", span=(tok.start, tok.end))
        return tok

    def parse(self):
        node = self.or_expr()
        tok = self.peek()
        if tok is not None:
            raise ExpressionError(f"unexpected {tok.text!r}", span=(tok.start, tok.end))
        return node

    def or_expr(self):
        node = self.and_expr()
        while (tok := self.peek()) and tok.kind == "or":
            self.take()
            rhs = self.and_expr()
            node = ("bin", "or", node, rhs, (tok.start, tok.end))
        return node

    def and_expr(self):
        node = self.not_expr()
        while (tok := self.peek()) and tok.kind == "and":
            self.take()
            rhs = self.not_expr()
            node = ("bin", "and", node, rhs, (tok.start, tok.end))
        return node

    def not_expr(self):
        tok = self.peek()
        if tok and tok.kind == "not":
            self.take()
            return ("un", "not", self.not_expr(), (tok.start, tok.end))
        return self.cmp_expr()

    def cmp_expr(self):
        node = self.add_expr()
        tok = self.peek()
        if tok and tok.kind == "op" and tok.text in ("==", "!=", "<", "<=", ">", ">="):
            self.take()
            rhs = self.add_expr()
            node = ("bin", tok.text, node, rhs, (tok.start, tok.end))
        return node

    def add_expr(self):
        node = self.mul_expr()
        while (tok := self.peek()) and tok.kind == "op" and tok.text in ("+", "-"):
            self.take()
            rhs = self.mul_expr()
            node = ("bin", tok.text, node, rhs, (tok.start, tok.end))
        return node

    def mul_expr(self):
        node = self.unary()
        while (tok := self.peek()) and tok.kind == "op" and tok.text in ("*", "/"):
            self.take()
            rhs = self.unary()
            node = ("bin", tok.text, node, rhs, (tok.start, tok.end))
        return node

    def unary(self):
        tok = self.peek()
        if tok and tok.kind == "op" and tok.text == "-":
            self.take()
            return ("un", "neg", self.unary(), (tok.start, tok.end))
        return self.atom()

    def atom(self):
        tok = self.take()
        if tok.kind == "number":
            value = float(tok.text) if "." in tok.text else int(tok.text)
            return ("num", value)
        if tok.kind == "string":
            return ("str", tok.text[1:-1])
        if tok.kind == "true":
            return ("bool", True)
        if tok.kind == "false":
            return ("bool", False)
        if tok.kind == "null":
            return ("null",)
        if tok.kind == "ident":
            name = tok.text
            # datum.col is accepted as an alias for the bare column name
            if "." in name:
                name = name.split(".", 1)[1]
            return ("col", name, (tok.start, tok.end))
        if tok.kind == "op" and tok.text == "(":
            node = self.or_expr()
            self.expect_close()
            return node
        raise ExpressionError(f"unexpected {tok.text!r}", span=(tok.start, tok.end))

    def expect_close(self):
        tok = self.take()
        if tok.kind != "op" or tok.text != ")":
            raise ExpressionError(f"expected ')', found {tok.text!r}", span=(tok.start, tok.end))


def parse_expression(source: str):
    """Parse to an AST; raises ExpressionError with a source span."""
    return _Parser(source).parse()


def _truthy(v) -> bool:
    if v is None:
        return False
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, float)):
        return v != 0
    if isinstance(v, str):
        return v != ""
    return True


def _compare(op: str, a, b, span):
    if a is None or b is None:
        return False
    # date/quarter literals may appear as strings against temporal columns
    try:
        if isinstance(a, TemporalValue) and isinstance(b, str):
            b = parse_temporal(b)
        elif isinstance(b, TemporalValue) and isinstance(a, str):
            a = parse_temporal(a)
    except TypeCoercionError as exc:
        raise ExpressionError(str(exc), span=span)
    if isinstance(a, TemporalValue) and isinstance(b, TemporalValue):
        a, b = a.ordinal, b.ordinal
    try:
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
    except TypeError as exc:
        raise ExpressionError(f"cannot compare {a!r} and {b!r}", span=span) from exc
    raise ExpressionError(f"unknown comparison {op}", span=span)


def eval_node(node, row: dict):
    kind = node[0]
    if kind == "num" or kind == "str" or kind == "bool":
        return node[1]
    if kind == "null":
        return None
    if kind == "col":
        name = node[1]
        if name not in row:
            raise ExpressionError(f"unknown column {name!r}", span=node[2])
        return row[name]
    if kind == "un":
        _, op, operand, span = node
        v = eval_node(operand, row)
        if op == "not":
            return not _truthy(v)
        if v is None:
            return None
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ExpressionError(f"cannot negate {v!r}", span=span)
        return -v
    if kind == "bin":
        _, op, left, right, span = node
        if op == "and":
            return _truthy(eval_node(left, row)) and _truthy(eval_node(right, row))
        if op == "or":
            return _truthy(eval_node(left, row)) or _truthy(eval_node(right, row))
        a = eval_node(left, row)
        b = eval_node(right, row)
        if op in ("==", "!=", "<", "<=", ">", ">="):
            return _compare(op, a, b, span)
        if a is None or b is None:
            return None
        if not isinstance(a, (int, float)) or not isinstance(b, (int, float)) or isinstance(a, bool) or isinstance(b, bool):
            raise ExpressionError(f"arithmetic needs numbers, got {a!r} and {b!r}", span=span)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0:
                raise ExpressionError("division by zero", span=span)
            return a / b
    raise ExpressionError(f"bad node {node!r}")


def eval_expression(source: str, row: dict):
    """Parse and evaluate in one step against a row binding."""
    return eval_node(parse_expression(source), row)
