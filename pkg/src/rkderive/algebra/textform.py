"""Plain-text canonical form for polynomials, and a parser for it.

Terms are written largest first under the chosen order, e.g.
``a32*a43*b4*c2 - 1/24`` or ``-1/2*b2*c2^2 + 1/6``.  The parser also
accepts parentheses, ``**`` for powers, unary minus, division by
constants and a single ``lhs = rhs`` equation (read as ``lhs - rhs``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from .poly import LEX, MonomialOrder, MultiPoly, VarTable


class ParseError(ValueError):
    """Malformed polynomial text; ``column`` is 1-based."""

    def __init__(self, message: str, column: int, line: Optional[int] = None):
        self.message = message
        self.column = column
        self.line = line
        where = f"line {line}, column {column}" if line is not None else f"column {column}"
        super().__init__(f"{where}: {message}")


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(names: Sequence[str], exps) -> str:
    parts = []
    for n, k in zip(names, exps):
        if k == 1:
            parts.append(n)
        elif k:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def format_poly(p: MultiPoly, order: MonomialOrder = LEX, names: Optional[Sequence[str]] = None) -> str:
    if not p.terms:
        return "0"
    names = names or p.table.names
    out = []
    for e in sorted(p.terms, key=order.key, reverse=True):
        c = p.terms[e]
        mono = format_monomial(names, e)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()=−]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        num, name, op = m.groups()
        col = pos + 1
        if num is not None:
            tokens.append(("num", int(num), col))
        elif name is not None:
            tokens.append(("name", name, col))
        else:
            tokens.append(("op", "-" if op == "−" else ("^" if op == "**" else op), col))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, table: VarTable):
        self.tokens = _tokenize(text)
        self.i = 0
        self.table = table

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, col = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", col)

    def parse_equation(self) -> MultiPoly:
        lhs = self.expr()
        kind, val, col = self.peek()
        if kind == "op" and val == "=":
            self.take()
            lhs = lhs - self.expr()
            kind, val, col = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", col)
        return lhs

    def expr(self) -> MultiPoly:
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while True:
            kind, val, col = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                _, _, col = self.peek()
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    raise ParseError("division only by nonzero constants", col)
                acc = acc / d.constant_term()
            else:
                return acc

    def factor(self) -> MultiPoly:
        kind, val, col = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer", col)
            base = base ** val
        return base

    def atom(self) -> MultiPoly:
        kind, val, col = self.take()
        if kind == "num":
            return self.table.const(val)
        if kind == "name":
            if val not in self.table:
                raise ParseError(f"unknown variable {val!r}", col)
            return self.table.gen(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError("expected a number, variable or '('", col)


def parse_poly(text: str, table: VarTable) -> MultiPoly:
    """Parse one polynomial (or ``lhs = rhs`` equation) over ``table``."""
    return _Parser(text, table).parse_equation()


def names_in(text: str) -> List[str]:
    """Variable names in order of first appearance."""
    seen = []
    for kind, val, _ in _tokenize(text):
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen


def parse_polys(lines: Iterable[str], table: Optional[VarTable] = None) -> List[MultiPoly]:
    """Parse one polynomial per line; blank lines and ``#`` comments are skipped.

    Without a table, one is built from the names in order of appearance.
    """
    body = []
    for lineno, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if text:
            body.append((lineno, text))
    if table is None:
        names: List[str] = []
        for _, text in body:
            for n in names_in(text):
                if n not in names:
                    names.append(n)
        table = VarTable(names)
    out = []
    for lineno, text in body:
        try:
            out.append(parse_poly(text, table))
        except ParseError as exc:
            raise ParseError(exc.message, exc.column, lineno) from None
    return out
