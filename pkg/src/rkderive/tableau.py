"""Butcher tableaux: data model, exact order verification, catalogue,
embedded pairs, and text/LaTeX serialization.

Entries are :class:`fractions.Fraction`.  ``a`` is stored ragged: row ``i``
(0-based) holds the ``i`` entries left of the diagonal, so row 0 is empty.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import ParseError, RationalFunction, VarTable, format_rational
from .conditions import ConditionSet, a_name, generate_conditions, tree_conditions
from .solver import FamilySolution, parametrize


class TableauError(ValueError):
    """Malformed tableau: wrong dimensions, implicit entries, bad values."""


_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(text) -> Fraction:
    """Exact rational from ``"p/q"``, ``"n"`` or a Python int/Fraction.

    Floats and decimal strings are refused: a binary64 value is almost
    never the rational the author meant.
    """
    if isinstance(text, bool):
        raise TableauError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str) and _RATIONAL.match(text):
        value = Fraction(text.replace(" ", ""))
        return value
    raise TableauError(f"not an exact rational (use 'p/q'): {text!r}")


def _fracs(values) -> Tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)


def _ragged(a, s: int) -> Tuple[Tuple[Fraction, ...], ...]:
    rows = [list(r) for r in a]
    if len(rows) == s - 1:
        rows = [[]] + rows
    if len(rows) != s:
        raise TableauError(f"a has {len(rows)} rows, expected {s}")
    out = []
    for i, row in enumerate(rows):
        if len(row) == s:
            tail = [parse_rational(x) for x in row[i:]]
            if any(tail):
                raise TableauError(f"a[{i + 1}] has entries on or above the diagonal; "
                                   "only explicit methods are supported")
            row = row[:i]
        if len(row) != i:
            raise TableauError(f"a row {i + 1} has {len(row)} entries, expected {i}")
        out.append(_fracs(row))
    return tuple(out)


@dataclass(frozen=True)
class ButcherTableau:
    """An explicit Runge-Kutta method.

    ``a`` may be given ragged (``s`` rows, or ``s - 1`` rows without the
    empty first one) or as a full square matrix with zeros on and above
    the diagonal.  ``bhat`` is an optional second weight row.
    """

    c: Tuple[Fraction, ...]
    a: Tuple[Tuple[Fraction, ...], ...]
    b: Tuple[Fraction, ...]
    label: str = ""
    order: Optional[int] = None
    bhat: Optional[Tuple[Fraction, ...]] = None
    note: str = field(default="", compare=False)

    def __post_init__(self):
        b = _fracs(self.b)
        s = len(b)
        if s == 0:
            raise TableauError("a tableau needs at least one stage")
        c = _fracs(self.c)
        if len(c) != s:
            raise TableauError(f"c has {len(c)} entries, b has {s}")
        if c[0] != 0:
            raise TableauError("c1 must be 0 for an explicit method")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "a", _ragged(self.a, s))
        if self.bhat is not None:
            bhat = _fracs(self.bhat)
            if len(bhat) != s:
                raise TableauError(f"bhat has {len(bhat)} entries, expected {s}")
            object.__setattr__(self, "bhat", bhat)
        if self.order is not None and (not isinstance(self.order, int) or self.order < 0):
            raise TableauError(f"order must be a non-negative integer, got {self.order!r}")

    @property
    def s(self) -> int:
        return len(self.b)

    def entry(self, i: int, j: int) -> Fraction:
        """``a_ij`` with 1-based indices (zero on and above the diagonal)."""
        return self.a[i - 1][j - 1] if j < i else Fraction(0)

    def row_sum_violations(self) -> List[Tuple[int, Fraction]]:
        """``(i, c_i - sum_j a_ij)`` for every row where the row sum fails."""
        out = []
        for i in range(self.s):
            d = self.c[i] - sum(self.a[i], Fraction(0))
            if d:
                out.append((i + 1, d))
        return out

    def validate(self, require_row_sum: bool = True) -> List[str]:
        """Human-readable problems; empty when the tableau is clean."""
        issues = []
        if require_row_sum:
            for i, d in self.row_sum_violations():
                issues.append(f"row-sum violated in row {i}: c{i} - sum(a{i}j) = {d}")
        return issues

    def values(self, weights: str = "b") -> Dict[str, Fraction]:
        """Variable assignment ``{a_ij, b_i, c_i}`` for symbolic substitution."""
        w = self.b if weights == "b" else self.bhat
        if w is None:
            raise TableauError("this tableau has no bhat row")
        vals = {f"b{i + 1}": w[i] for i in range(self.s)}
        vals.update({f"c{i + 1}": self.c[i] for i in range(1, self.s)})
        for i in range(2, self.s + 1):
            for j in range(1, i):
                vals[a_name(i, j)] = self.entry(i, j)
        return vals

    def with_weights(self, b: Sequence, label: str = "", order: Optional[int] = None) -> "ButcherTableau":
        return ButcherTableau(self.c, self.a, b, label=label or self.label, order=order)

    def perturbed(self, index: int, delta) -> "ButcherTableau":
        """Copy with ``b[index]`` (1-based) shifted by ``delta``."""
        b = list(self.b)
        b[index - 1] += Fraction(delta)
        return ButcherTableau(self.c, self.a, b, label=f"{self.label} (b{index} {_signed(delta)})",
                              order=None)

    # serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        doc = {"s": self.s,
               "c": [format_rational(x) for x in self.c],
               "a": [[format_rational(x) for x in row] for row in self.a],
               "b": [format_rational(x) for x in self.b]}
        if self.bhat is not None:
            doc["bhat"] = [format_rational(x) for x in self.bhat]
        if self.label:
            doc["label"] = self.label
        if self.order is not None:
            doc["order"] = self.order
        return doc

    def to_text(self) -> str:
        return to_text_form(self)

    def to_latex(self) -> str:
        return to_latex(self)


def _signed(x) -> str:
    x = Fraction(x)
    return f"+{x}" if x >= 0 else f"{x}"


# -- exact order verification --------------------------------------------------

@dataclass(frozen=True)
class OrderReport:
    order: int
    satisfied: bool
    residuals: Tuple[Tuple[str, Fraction], ...]

    def failures(self) -> List[Tuple[str, Fraction]]:
        return [(lab, r) for lab, r in self.residuals if r]

    def __str__(self):
        if self.satisfied:
            return f"satisfied: all {len(self.residuals)} conditions of order <= {self.order} vanish"
        lines = [f"not satisfied at order {self.order}:"]
        lines += [f"  {lab}: residual {format_rational(r)}" for lab, r in self.failures()]
        return "\n".join(lines)


@lru_cache(maxsize=32)
def _trees(s: int, p: int) -> ConditionSet:
    return tree_conditions(s, p)


def verify_order(t: ButcherTableau, p: int, weights: str = "b") -> OrderReport:
    """Substitute the tableau into every rooted-tree condition of order <= p.

    The tree conditions assume the row-sum convention, so any row-sum
    violation is reported as an extra failing residual.
    """
    if p < 1:
        raise ValueError("order must be at least 1")
    cs = _trees(t.s, p)
    vals = t.values(weights)
    residuals = [(lab, raw.evaluate(vals)) for lab, raw in zip(cs.labels, cs.raw)]
    for i, d in t.row_sum_violations():
        residuals.append((f"row-sum c{i} = sum(a{i}j)", d))
    return OrderReport(p, all(r == 0 for _, r in residuals), tuple(residuals))


# -- catalogue -----------------------------------------------------------------

def _t(c, a, b, label, order, note="") -> ButcherTableau:
    return ButcherTableau(c, a, b, label=label, order=order, note=note)


def catalogue() -> Dict[str, ButcherTableau]:
    """Named classical methods (and one third-order family member)."""
    h, t3, r = Fraction(1, 2), Fraction(1, 3), Fraction
    return {
        "euler": _t([0], [[]], [1], "Euler", 1),
        "improved-euler": _t([0, 1], [[], [1]], [h, h], "improved Euler (Heun 2)", 2),
        "kutta3": _t([0, h, 1], [[], [h], [-1, 2]], [r(1, 6), r(2, 3), r(1, 6)], "Kutta 3", 3),
        "heun3": _t([0, t3, 2 * t3], [[], [t3], [0, 2 * t3]], [r(1, 4), 0, r(3, 4)], "Heun 3", 3,
                    note="b1 = 1/4; the value 1/3 sometimes printed gives weights summing to 13/12"),
        "order3-c2=-1-c3=1": _t([0, -1, 1], [[], [-1], [r(7, 5), r(-2, 5)]],
                                [r(2, 3), r(-1, 12), r(5, 12)], "order 3, c2 = -1, c3 = 1", 3),
        "rk4": _t([0, h, h, 1], [[], [h], [0, h], [0, 0, 1]],
                  [r(1, 6), t3, t3, r(1, 6)], "classic RK4", 4),
        "kutta38": _t([0, t3, 2 * t3, 1], [[], [t3], [-t3, 1], [1, -1, 1]],
                      [r(1, 8), r(3, 8), r(3, 8), r(1, 8)], "Kutta 3/8", 4),
    }


def get_method(name: str) -> ButcherTableau:
    cat = catalogue()
    if name not in cat:
        raise KeyError(f"unknown method {name!r}; known: {', '.join(cat)}")
    return cat[name]


# -- embedded pairs ----------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddedPair:
    """A base method plus one extra stage (a-row = base weights) and hat weights."""

    base: ButcherTableau
    shat: Tuple[Fraction, ...]
    order: int
    order_hat: int

    @property
    def c_extra(self) -> Fraction:
        return sum(self.base.b, Fraction(0))

    @property
    def extended(self) -> ButcherTableau:
        """The (s+1)-stage scheme with the base weights (last one 0) and ``bhat``."""
        a = [list(row) for row in self.base.a] + [list(self.base.b)]
        return ButcherTableau(list(self.base.c) + [self.c_extra], a, list(self.base.b) + [0],
                              label=f"{self.base.label} {self.order}({self.order_hat})",
                              order=self.order, bhat=self.shat)

    @property
    def hat_method(self) -> ButcherTableau:
        """The hat weights used as a standalone (s+1)-stage method."""
        ext = self.extended
        return ButcherTableau(ext.c, ext.a, self.shat, label=f"{ext.label} hat weights",
                              order=self.order_hat)

    def verify(self) -> Tuple[OrderReport, OrderReport]:
        ext = self.extended
        return verify_order(ext, self.order), verify_order(ext, self.order_hat, weights="bhat")


@dataclass(frozen=True)
class EmbeddedFamily:
    """Hat weights as an affine family in free parameters ``r1, ...``."""

    base: ButcherTableau
    family: FamilySolution
    order: int
    order_hat: int
    conditions: ConditionSet

    @property
    def free(self) -> Tuple[str, ...]:
        return self.family.free

    def hat_weights(self) -> List[RationalFunction]:
        return [self.family[f"s{i}"] for i in range(1, self.base.s + 2)]

    def pair(self, **params) -> EmbeddedPair:
        fixed = self.family.specialize(params)
        if fixed.free:
            raise ValueError(f"free parameters left unset: {', '.join(fixed.free)}")
        shat = [fixed[f"s{i}"].constant_value() for i in range(1, self.base.s + 2)]
        return EmbeddedPair(self.base, tuple(shat), self.order, self.order_hat)


def _hat_table(n: int) -> VarTable:
    names = [a_name(i, j) for i in range(2, n + 1) for j in range(1, i)]
    names += [f"b{i}" for i in range(1, n + 1)] + [f"c{i}" for i in range(2, n + 1)]
    names += [f"s{i}" for i in range(1, n + 1)]
    return VarTable(names)


def embed_lower_order(base: ButcherTableau, p: Optional[int] = None) -> EmbeddedFamily:
    """Hat weights of order ``p - 1`` on the base stages plus one extra stage.

    The extra stage has a-row equal to the base weights and node
    ``c = sum(b)``.  The conditions are the autonomous ones for the
    extended scheme, with the weights renamed ``s1..s(s+1)``; their
    affine solution is returned with any undetermined weight turned into
    a parameter ``r1, r2, ...``.
    """
    p = p if p is not None else base.order
    if p is None or p < 2:
        raise ValueError("the base order must be known and at least 2")
    if not verify_order(base, p).satisfied:
        raise ValueError(f"{base.label or 'tableau'} is not of order {p}")
    n = base.s + 1
    pair0 = EmbeddedPair(base, tuple([Fraction(0)] * n), p, p - 1)
    ext = pair0.extended
    table = _hat_table(n)
    cs = generate_conditions(n, p - 1, autonomous=True, table=table)
    vals = {k: v for k, v in ext.values().items() if not k.startswith("b")}
    ren = {f"b{i}": table.gen(f"s{i}") for i in range(1, n + 1)}
    eqs = [e.subs(vals).subs(ren) for e in cs.equations]
    unknowns = [f"s{i}" for i in range(1, n + 1)]
    fam = parametrize(eqs, unknowns, label=f"hat weights of order {p - 1} for {base.label}")
    return EmbeddedFamily(base, fam, p, p - 1, cs)


# -- text form -----------------------------------------------------------------

def to_text_form(t: ButcherTableau) -> str:
    """Structured JSON document; every number is an exact ``"p/q"`` string.

    Each vector and each row of ``a`` sits on one line.
    """
    doc = t.to_dict()
    lines = []
    for key, value in doc.items():
        if key == "a":
            rows = ",\n".join("    " + json.dumps(r) for r in value)
            lines.append(f'  "a": [\n{rows}\n  ]')
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value)}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


class _Float:
    def __init__(self, text):
        self.text = text


def _locate(doc: str, needle: str) -> Tuple[int, int]:
    pos = doc.find(needle)
    if pos < 0:
        return 1, 1
    line = doc.count("\n", 0, pos) + 1
    col = pos - (doc.rfind("\n", 0, pos) + 1) + 1
    return line, col


def from_text_form(doc: str) -> ButcherTableau:
    """Parse :func:`to_text_form` output; errors carry line and column."""
    try:
        data = json.loads(doc, parse_float=_Float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.colno, exc.lineno) from None

    def fail(msg, needle=None):
        line, col = _locate(doc, needle) if needle else (1, 1)
        raise ParseError(msg, col, line)

    def walk(x):
        if isinstance(x, _Float):
            fail(f"floating-point literal {x.text} is not allowed; write it as a 'p/q' string", x.text)
        if isinstance(x, list):
            for y in x:
                walk(y)
        if isinstance(x, dict):
            for y in x.values():
                walk(y)

    walk(data)
    if not isinstance(data, dict):
        fail("expected a JSON object")
    for key in ("c", "a", "b"):
        if key not in data:
            fail(f"missing field {key!r}")
    unknown = set(data) - {"s", "c", "a", "b", "bhat", "label", "order"}
    if unknown:
        fail(f"unknown field(s): {', '.join(sorted(unknown))}", f'"{sorted(unknown)[0]}"')
    try:
        t = ButcherTableau(data["c"], data["a"], data["b"], label=data.get("label", ""),
                           order=data.get("order"), bhat=data.get("bhat"))
    except TableauError as exc:
        bad = re.search(r"'([^']*)'", str(exc))
        fail(str(exc), f'"{bad.group(1)}"' if bad else None)
    if "s" in data and data["s"] != t.s:
        fail(f"s = {data['s']} but the weights have {t.s} entries", '"s"')
    return t


def load_tableau(path: str) -> ButcherTableau:
    with open(path, encoding="utf-8") as fh:
        return from_text_form(fh.read())


# -- LaTeX -----------------------------------------------------------------------

def _tex(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    sign = "-" if x < 0 else ""
    return f"{sign}\\frac{{{abs(x.numerator)}}}{{{x.denominator}}}"


def to_latex(t: ButcherTableau) -> str:
    """Butcher array: c column, lower-triangular a, rule, b row (and bhat row)."""
    s = t.s
    lines = [f"\\begin{{array}}{{c|{'c' * s}}}"]
    for i in range(s):
        cells = [_tex(x) for x in t.a[i]] + [""] * (s - i)
        lines.append(" & ".join([_tex(t.c[i])] + cells) + " \\\\")
    lines.append("\\hline")
    lines.append(" & ".join([""] + [_tex(x) for x in t.b]) + " \\\\")
    if t.bhat is not None:
        lines.append(" & ".join([""] + [_tex(x) for x in t.bhat]) + " \\\\")
    lines.append("\\end{array}")
    return "\n".join(lines) + "\n"
