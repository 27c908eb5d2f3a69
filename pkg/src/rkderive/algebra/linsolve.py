"""Gaussian elimination over Q or over rational functions in the other variables."""

from __future__ import annotations

from typing import Dict, List, Sequence, Union

from .poly import MultiPoly
from .ratfunc import RationalFunction


class LinearSystemError(ValueError):
    pass


class NonlinearSystemError(LinearSystemError):
    """An equation is not of degree <= 1 jointly in the unknowns."""


class InconsistentSystemError(LinearSystemError):
    """Elimination produced ``0 = witness`` with a nonzero witness."""

    def __init__(self, witness: RationalFunction, equation_index: int):
        self.witness = witness
        self.equation_index = equation_index
        super().__init__(f"no solution: equation {equation_index} reduces to 0 = {witness}")


class UnderdeterminedSystemError(LinearSystemError):
    """Rank deficient; ``free_candidates`` are the non-pivot unknowns."""

    def __init__(self, free_candidates: Sequence[str]):
        self.free_candidates = tuple(free_candidates)
        super().__init__("underdetermined: no pivot for " + ", ".join(self.free_candidates))


Equation = Union[MultiPoly, RationalFunction]


def _numerator(eq: Equation) -> MultiPoly:
    return eq.num if isinstance(eq, RationalFunction) else eq


def coefficient_rows(eqs: Sequence[Equation], unknowns: Sequence[str]) -> List[List[MultiPoly]]:
    """Rows ``[coef_1, ..., coef_n, rhs]`` with ``sum coef_i*x_i = rhs``."""
    rows = []
    n = len(unknowns)
    for k, eq in enumerate(eqs):
        p = _numerator(eq)
        table = p.table
        row = [table.zero] * n + [table.zero]
        for exps, coef in p.coefficients_in(unknowns).items():
            deg = sum(exps)
            if deg == 0:
                row[n] = -coef
            elif deg == 1:
                row[exps.index(1)] = coef
            else:
                raise NonlinearSystemError(f"equation {k} is not linear in {list(unknowns)}: {p}")
        rows.append(row)
    return rows


def is_linear_in(eq: Equation, unknowns: Sequence[str]) -> bool:
    p = _numerator(eq)
    return all(sum(e) <= 1 for e in p.coefficients_in(unknowns))


def linear_solve(eqs: Sequence[Equation], unknowns: Sequence[str], free: Sequence[str] = ()
                 ) -> Dict[str, RationalFunction]:
    """Solve ``eqs = 0`` for ``unknowns``; names in ``free`` stay as parameters.

    Coefficients live in the field of rational functions of every other
    variable, so with no other variables this is elimination over Q.
    Returns ``{unknown: RationalFunction}`` for every non-free unknown.
    """
    unk = [u for u in unknowns if u not in set(free)]
    if not eqs:
        if unk:
            raise UnderdeterminedSystemError(unk)
        return {}
    rows = [[RationalFunction(c, _normalize=False) for c in row]
            for row in coefficient_rows(eqs, unk)]
    origin = list(range(len(rows)))
    n = len(unk)
    pivots = []
    r = 0
    for col in range(n):
        cands = [i for i in range(r, len(rows)) if not rows[i][col].is_zero()]
        if not cands:
            continue
        best = min(cands, key=lambda i: (len(rows[i][col].num) + len(rows[i][col].den), i))
        rows[r], rows[best] = rows[best], rows[r]
        origin[r], origin[best] = origin[best], origin[r]
        piv = rows[r][col]
        rows[r] = [x / piv if not x.is_zero() else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b if not b.is_zero() else a for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if not rows[i][n].is_zero():
            raise InconsistentSystemError(rows[i][n], origin[i])
    if len(pivots) < n:
        raise UnderdeterminedSystemError([unk[c] for c in range(n) if c not in pivots])
    return {unk[col]: rows[i][n] for i, col in enumerate(pivots)}
