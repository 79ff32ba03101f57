"""Polynomial expression strings: rationals, names, + - * ^ and parentheses.

The only division allowed is a rational literal ``p/q`` of two integers,
which is how coefficients such as ``1/2*eta1*dX1`` are written back out.
Parsing goes through Python's own ``ast`` after rewriting ``^`` to ``**``;
error positions refer to the original string.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Mapping

from .algebra import Chart, Poly


class ParseError(ValueError):
    def __init__(self, message: str, text: str, line: int = 1, column: int = 1):
        self.message = message
        self.text = text
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


def _translate(text: str) -> tuple[str, list[int]]:
    """Replace ``^`` by ``**``; return the new text and a map new column -> old column."""
    out = []
    cols = []
    for i, ch in enumerate(text):
        if ch == "^":
            out.append("**")
            cols.extend([i, i])
        else:
            out.append(ch)
            cols.append(i)
    cols.append(len(text))
    return "".join(out), cols


def _position(text: str, cols: list[int], lineno: int, offset: int) -> tuple[int, int]:
    """Convert an ``ast`` position in the rewritten text to a 1-based line/column."""
    lines = text.split("\n")
    start = sum(len(l) + 1 for l in lines[: lineno - 1])
    # rewritten and original texts share line breaks; offset counts in the rewritten line
    rewritten_start = start + sum(l.count("^") for l in lines[: lineno - 1])
    idx = rewritten_start + offset
    orig = cols[min(idx, len(cols) - 1)]
    return lineno, orig - start + 1


def _int_literal(node):
    """Value of ``k`` or ``-k`` for an integer literal ``k`` (``-1/5`` parses as ``(-1)/5``)."""
    sign = 1
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        sign, node = -1, node.operand
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return sign * node.value
    return None


class _Builder:
    def __init__(self, text, cols, chart: Chart, names: Mapping[str, Poly] | None, shift: int = 0):
        self.text = text
        self.shift = shift
        self.cols = cols
        self.chart = chart
        self.names = names

    def fail(self, node, message):
        lineno = getattr(node, "lineno", 1)
        offset = getattr(node, "col_offset", 0) - (self.shift if lineno == 1 else 0)
        line, col = _position(self.text, self.cols, lineno, offset)
        raise ParseError(message, self.text, line, col)

    def lookup(self, node, name: str) -> Poly:
        if self.names is not None and name in self.names:
            return self.names[name]
        if name in self.chart.index:
            return self.chart.gen(name)
        self.fail(node, f"unknown name {name!r}")

    def rational(self, node):
        """Integer literal, or ``p/q`` of integer literals, else None."""
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                self.fail(node, f"only integer and p/q rational literals are allowed, got {node.value!r}")
            return Fraction(node.value)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
            num = _int_literal(node.left)
            den = _int_literal(node.right)
            if num is not None and den is not None:
                if den == 0:
                    self.fail(node.right, "zero denominator")
                return Fraction(num, den)
            self.fail(node, "division is only allowed inside a rational literal p/q")
        return None

    def build(self, node) -> Poly:
        q = self.rational(node)
        if q is not None:
            return self.chart.const(q)
        if isinstance(node, ast.Name):
            return self.lookup(node, node.id)
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                return -self.build(node.operand)
            if isinstance(node.op, ast.UAdd):
                return self.build(node.operand)
            self.fail(node, "unsupported unary operator")
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                q = self.rational(node.right)
                if q is None or q.denominator != 1 or q < 0:
                    self.fail(node.right, "exponent must be a non-negative integer")
                return self.build(node.left) ** int(q)
            ops = {ast.Add: "__add__", ast.Sub: "__sub__", ast.Mult: "__mul__"}
            for kind, meth in ops.items():
                if isinstance(node.op, kind):
                    return getattr(self.build(node.left), meth)(self.build(node.right))
            self.fail(node, "unsupported operator")
        self.fail(node, f"unsupported syntax {type(node).__name__}")


def parse_expression(text: str, chart: Chart, names: Mapping[str, Poly] | None = None) -> Poly:
    """Parse ``text`` into a polynomial on ``chart``.

    ``names`` may supply extra symbols; otherwise any generator of the chart
    (including differentials such as ``dx``) can be used.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}", str(text))
    if not text.strip():
        raise ParseError("empty expression", text)
    if "**" in text:
        idx = text.index("**")
        line = text.count("\n", 0, idx) + 1
        col = idx - (text.rfind("\n", 0, idx) + 1) + 1
        raise ParseError("use ^ for powers", text, line, col)
    rewritten, cols = _translate(text)
    # the parentheses let the expression span lines and carry outer whitespace
    try:
        tree = ast.parse("(" + rewritten + "\n)", mode="eval")
    except SyntaxError as exc:
        lineno = exc.lineno or 1
        offset = (exc.offset or 1) - 1 - (1 if lineno == 1 else 0)
        lineno, offset = _clamp(rewritten, lineno, offset)
        line, col = _position(text, cols, lineno, offset)
        raise ParseError("syntax error", text, line, col) from None
    return _Builder(text, cols, chart, names, shift=1).build(tree.body)


def _clamp(rewritten: str, lineno: int, offset: int) -> tuple[int, int]:
    lines = rewritten.split("\n")
    if lineno > len(lines):
        return len(lines), len(lines[-1])
    return lineno, max(0, min(offset, len(lines[lineno - 1])))
