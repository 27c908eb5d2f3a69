"""Order-condition systems for explicit Runge-Kutta methods.

Two independent routes produce the conditions:

* :func:`generate_conditions` expands the stages as truncated series and
  collects the coefficients of ``T - RK`` (scalar f, general or
  autonomous);
* :func:`tree_conditions` writes ``sum b_i Phi_i(t) - 1/gamma(t)`` for
  every rooted tree of order <= p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import GRLEX, MultiPoly, VarTable
from .series import (
    DiffMonomial,
    collect_difference,
    combine,
    dm_str,
    expand_stages,
    taylor_target,
)
from .trees import RootedTree, enumerate_trees


def a_name(i: int, j: int) -> str:
    return f"a{i}{j}" if i < 10 and j < 10 else f"a{i}_{j}"


def rk_vars(s: int, extra: Sequence[str] = ()) -> VarTable:
    """Variables a21, a31, a32, ..., b1..bs, c2..cs (then ``extra``).

    This is the lex order used for the order-4 reduced basis.
    """
    names = [a_name(i, j) for i in range(2, s + 1) for j in range(1, i)]
    names += [f"b{i}" for i in range(1, s + 1)]
    names += [f"c{i}" for i in range(2, s + 1)]
    names += [n for n in extra if n not in names]
    return VarTable(names)


def symbolic_method(table: VarTable, s: int):
    """Symbolic ``(a, b, c)`` with ragged lower-triangular ``a`` and c1 = 0."""
    a = [[table.gen(a_name(i, j)) for j in range(1, i)] for i in range(1, s + 1)]
    b = [table.gen(f"b{i}") for i in range(1, s + 1)]
    c = [table.zero] + [table.gen(f"c{i}") for i in range(2, s + 1)]
    return a, b, c


def row_sum_substitution(table: VarTable, s: int) -> Dict[str, MultiPoly]:
    """``a_i1 = c_i - sum_{j>=2} a_ij`` for i = 2..s."""
    subs = {}
    for i in range(2, s + 1):
        rest = table.gen(f"c{i}")
        for j in range(2, i):
            rest = rest - table.gen(a_name(i, j))
        subs[a_name(i, 1)] = rest
    return subs


def canonical(p: MultiPoly) -> MultiPoly:
    """Integer coefficients, content 1, positive graded-lex leading coefficient."""
    return p.primitive(GRLEX)


def label_of(h_power: int, dm: DiffMonomial) -> str:
    head = "" if h_power == 0 else ("h" if h_power == 1 else f"h^{h_power}")
    return f"{head} * {dm_str(dm)}" if head else dm_str(dm)


@dataclass(frozen=True)
class ConditionSet:
    """Polynomials each understood as ``= 0``, with provenance labels.

    ``equations`` are canonical (see :func:`canonical`); ``raw`` keeps the
    coefficients as extracted (``T - RK`` orientation, or
    ``sum b Phi - 1/gamma`` for trees).
    """

    stages: int
    order: int
    mode: str
    row_sum: bool
    table: VarTable
    equations: Tuple[MultiPoly, ...]
    labels: Tuple[str, ...]
    raw: Tuple[MultiPoly, ...] = field(repr=False, default=())

    def __len__(self):
        return len(self.equations)

    def __iter__(self):
        return iter(self.equations)

    def subs(self, mapping: Mapping[str, object]) -> "ConditionSet":
        """Substitute values and re-canonicalize (dropping zeros and duplicates)."""
        return _build(self.stages, self.order, self.mode, self.row_sum, self.table,
                      [(lab, r.subs(mapping)) for lab, r in zip(self.labels, self.raw)])

    def to_records(self) -> List[dict]:
        return [{"equation": str(e), "label": lab} for e, lab in zip(self.equations, self.labels)]


def _build(s, p, mode, row_sum, table, labelled) -> ConditionSet:
    eqs: List[MultiPoly] = []
    labels: List[str] = []
    raw: List[MultiPoly] = []
    index: Dict[MultiPoly, int] = {}
    for lab, r in labelled:
        if not r:
            continue
        e = canonical(r)
        if e in index:
            k = index[e]
            labels[k] = labels[k] + "; " + lab
            continue
        index[e] = len(eqs)
        eqs.append(e)
        labels.append(lab)
        raw.append(r)
    return ConditionSet(s, p, mode, row_sum, table, tuple(eqs), tuple(labels), tuple(raw))


def generate_conditions(s: int, p: int, autonomous: bool = False, row_sum: bool = False,
                        subs: Optional[Mapping[str, object]] = None,
                        table: Optional[VarTable] = None) -> ConditionSet:
    """Order conditions from the series expansion of an s-stage explicit method.

    The equations are the nonzero coefficients of ``T - RK``; with
    ``row_sum`` the substitution ``a_i1 = c_i - sum_{j>=2} a_ij`` is
    applied, then ``subs`` (e.g. ``{"c4": 1}``).
    """
    table = table or rk_vars(s)
    a, b, c = symbolic_method(table, s)
    ks = expand_stages(a, c, p, table, autonomous=autonomous)
    diff = collect_difference(taylor_target(p, table, autonomous), combine(b, ks))
    mapping: Dict[str, object] = {}
    if row_sum:
        mapping.update(row_sum_substitution(table, s))
    labelled = []
    for (hp, dm), coeff in diff.items():
        if mapping:
            coeff = coeff.subs(mapping)
        if subs:
            coeff = coeff.subs(subs)
        labelled.append((label_of(hp, dm), coeff))
    return _build(s, p, "autonomous" if autonomous else "general", row_sum, table, labelled)


def elementary_weights(t: RootedTree, table: VarTable, s: int,
                       cache: Optional[dict] = None) -> List[MultiPoly]:
    """``Phi_i(t)`` for i = 1..s under the row-sum convention.

    A leaf subtree contributes ``c_i``; any other subtree ``u``
    contributes ``sum_{j>=2} a_ij Phi_j(u)`` (Phi_1(u) vanishes).
    """
    cache = {} if cache is None else cache
    if t in cache:
        return cache[t]
    _, _, c = symbolic_method(table, s)
    phi = []
    for i in range(1, s + 1):
        w = table.one
        for u in t.children:
            if not u.children:
                w = w * c[i - 1]
            else:
                sub = elementary_weights(u, table, s, cache)
                acc = table.zero
                for j in range(2, i):
                    acc = acc + table.gen(a_name(i, j)) * sub[j - 1]
                w = w * acc
        phi.append(w)
    cache[t] = phi
    return phi


def tree_conditions(s: int, p: int, table: Optional[VarTable] = None) -> ConditionSet:
    """One equation ``sum_i b_i Phi_i(t) - 1/gamma(t)`` per tree of order <= p."""
    table = table or rk_vars(s)
    b = [table.gen(f"b{i}") for i in range(1, s + 1)]
    cache: dict = {}
    labelled = []
    for t in enumerate_trees(p):
        phi = elementary_weights(t, table, s, cache)
        eq = sum((bi * ph for bi, ph in zip(b, phi)), table.zero) - Fraction(1, t.density)
        labelled.append((f"{t} (gamma={t.density})", eq))
    return _build(s, p, "trees", True, table, labelled)
