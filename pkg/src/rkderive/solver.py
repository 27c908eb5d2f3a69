"""Coefficient families from staged linear solves.

Each scenario encodes which equations determine which unknowns, in the
order a person would do it by hand; every stage is a linear solve over
the field of rational functions in the remaining variables.  Whatever
the stages do not use is checked afterwards: it must vanish identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import (
    GREVLEX,
    GRLEX,
    LEX,
    MultiPoly,
    NonlinearSystemError,
    RationalFunction,
    UnderdeterminedSystemError,
    VarTable,
    buchberger,
    interreduce,
    is_linear_in,
    linear_solve,
    poly_reduce,
    substitute,
)
from .algebra.factor import poly_sqrt, split_factors
from .conditions import ConditionSet, a_name, generate_conditions, rk_vars


class ExcludedLocusError(ValueError):
    """A specialization makes one of the family's denominators vanish."""


class ResidualError(ArithmeticError):
    """An equation left out of the staged solve does not vanish."""

    def __init__(self, label: str, residual: RationalFunction):
        self.label = label
        self.residual = residual
        super().__init__(f"equation {label!r} leaves residual {residual}")


# -- helpers -----------------------------------------------------------------

def tidy(rf: RationalFunction, hints: Sequence[MultiPoly] = ()) -> RationalFunction:
    """Cancel the factors that :func:`split_factors` finds in both parts.

    ``hints`` are extra candidate factors (typically taken from other
    entries of the same solution); they let repeated non-linear factors be
    recognised and cancelled.
    """
    if rf.is_zero() or rf.den.is_constant():
        return rf
    kd, fd = split_factors(rf.den, hints)
    den_f = dict(fd)
    if rf.num.is_constant():
        kn, num_f = rf.num.constant_term(), {}
    else:
        kn, fn = split_factors(rf.num, list(hints) + [f for f, _ in fd])
        num_f = dict(fn)
    for f in list(den_f):
        if f in num_f:
            k = min(num_f[f], den_f[f])
            num_f[f] -= k
            den_f[f] -= k
    table = rf.table
    num = table.const(kn)
    for f, k in num_f.items():
        num = num * f ** k
    den = table.const(kd)
    for f, k in den_f.items():
        den = den * f ** k
    return RationalFunction(num, den)


def tidy_map(sol: Mapping[str, RationalFunction]) -> Dict[str, RationalFunction]:
    """:func:`tidy` every entry, sharing denominator factors as hints."""
    hints: List[MultiPoly] = []
    for v in sol.values():
        if not v.den.is_constant():
            for f, _ in split_factors(v.den)[1]:
                if f not in hints:
                    hints.append(f)
    hints.sort(key=lambda f: (f.total_degree(), len(f.terms)))
    return {k: tidy(v, hints) for k, v in sol.items()}


def _label_index(cs: ConditionSet, label: str) -> int:
    for i, lab in enumerate(cs.labels):
        if label in lab.split("; "):
            return i
    raise KeyError(f"no equation labelled {label!r}")


def _close(sol: Dict[str, RationalFunction]) -> Dict[str, RationalFunction]:
    """Substitute solved unknowns into each other until no solved name remains."""
    names = set(sol)
    for _ in range(len(sol) + 1):
        pending = {k: v for k, v in sol.items() if names & set(v.variables())}
        if not pending:
            return sol
        for k, v in pending.items():
            sol[k] = tidy(v.subs({n: sol[n] for n in names & set(v.variables())}))
    raise ValueError("cyclic solution map")


# -- the family type -------------------------------------------------------------

@dataclass(frozen=True)
class FamilySolution:
    """Closed forms ``unknown -> RationalFunction`` in the ``free`` variables.

    ``residuals`` holds the labels of equations that were not used by the
    staged solve and were verified to vanish identically; ``excluded`` holds
    the distinct (primitive) denominators of the map.
    """

    table: VarTable
    solution: Dict[str, RationalFunction]
    free: Tuple[str, ...]
    residuals: Tuple[str, ...] = ()
    excluded: Tuple[MultiPoly, ...] = ()
    label: str = ""
    notes: Tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def build(cls, table, solution, free, residuals=(), label="", notes=()) -> "FamilySolution":
        dens: List[MultiPoly] = []
        for v in solution.values():
            if not v.den.is_constant():
                d = v.den.primitive(GRLEX)
                if d not in dens:
                    dens.append(d)
        return cls(table, dict(solution), tuple(free), tuple(residuals), tuple(dens), label, tuple(notes))

    def __getitem__(self, name: str) -> RationalFunction:
        return self.solution[name]

    def __contains__(self, name: str) -> bool:
        return name in self.solution

    def excluded_factors(self) -> List[MultiPoly]:
        """Distinct factors of the excluded denominators (light peeling only)."""
        out: List[MultiPoly] = []
        for d in self.excluded:
            for f, _ in split_factors(d)[1]:
                if f not in out:
                    out.append(f)
        return out

    def substitute_into(self, p: MultiPoly) -> RationalFunction:
        return substitute(p, self.solution)

    def check(self, eqs: Iterable[MultiPoly]) -> List[int]:
        """Indices of equations that do not vanish identically under the map."""
        return [i for i, e in enumerate(eqs) if not self.substitute_into(e).is_zero()]

    def specialize(self, values: Mapping[str, object]) -> "FamilySolution":
        """Fix some free variables; refuses points on an excluded locus."""
        vals = {k: Fraction(v) if not isinstance(v, (MultiPoly, RationalFunction)) else v
                for k, v in values.items()}
        unknown = [k for k in vals if k not in self.free]
        if unknown:
            raise KeyError(f"not free variables of this family: {unknown}")
        for d in self.excluded:
            if substitute(d, vals).is_zero():
                raise ExcludedLocusError(f"{d} vanishes at {_fmt_point(vals)}")
        sol = {k: tidy(v.subs(vals)) for k, v in self.solution.items()}
        for k, v in vals.items():
            sol.setdefault(k, RationalFunction.coerce(v, self.table))
        free = tuple(f for f in self.free if f not in vals)
        return FamilySolution.build(self.table, sol, free, self.residuals, self.label, self.notes)

    def values(self) -> Dict[str, Fraction]:
        """Numeric values once every free variable has been fixed."""
        if self.free:
            raise ValueError(f"free variables remain: {', '.join(self.free)}")
        return {k: v.constant_value() for k, v in self.solution.items()}

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "free": list(self.free),
            "solution": {k: str(v) for k, v in self.solution.items()},
            "excluded": [str(d) for d in self.excluded],
            "residuals_verified": list(self.residuals),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _fmt_point(vals):
    return ", ".join(f"{k}={v}" for k, v in vals.items())


# -- generic staged solving --------------------------------------------------------

def staged_solve(eqs: Sequence[MultiPoly], stages: Sequence[Tuple[Sequence[int], Sequence[str]]],
                 labels: Optional[Sequence[str]] = None,
                 known: Optional[Mapping[str, RationalFunction]] = None) -> Dict[str, RationalFunction]:
    """Run linear solves stage by stage.

    ``stages`` lists ``(equation indices, unknowns)``; earlier results are
    substituted before each stage.  Indices refer to ``eqs``.
    """
    sol: Dict[str, RationalFunction] = dict(known or {})
    for idx, unknowns in stages:
        batch = [substitute(eqs[i], sol) if sol else eqs[i] for i in idx]
        try:
            part = linear_solve(batch, unknowns)
        except NonlinearSystemError as exc:
            where = [labels[i] if labels else str(i) for i in idx]
            raise NonlinearSystemError(f"stage {list(unknowns)} from {where}: {exc}") from exc
        for k, v in part.items():
            sol[k] = tidy(v)
        sol = tidy_map(_close(sol))
    return sol


def verify_residuals(sol: Mapping[str, RationalFunction], eqs: Sequence[MultiPoly],
                     labels: Sequence[str]) -> List[str]:
    """Labels of the equations checked; raises on the first non-vanishing one."""
    done = []
    for e, lab in zip(eqs, labels):
        r = substitute(e, sol)
        if not r.is_zero():
            raise ResidualError(lab, r)
        done.append(lab)
    return done


def parametrize(eqs: Sequence[MultiPoly], unknowns: Sequence[str], free: Sequence[str] = (),
                prefix: str = "r", label: str = "") -> FamilySolution:
    """Affine/rational solution of a linear system, naming missing pivots.

    When the system is rank deficient the non-pivot unknowns are replaced by
    fresh parameters ``r1, r2, ...`` (``unknown = r_k``).
    """
    eqs = [e for e in eqs if not e.is_zero()]
    if not eqs:
        raise ValueError("no equations to solve")
    table = eqs[0].table
    try:
        sol = linear_solve(eqs, unknowns, free)
        return FamilySolution.build(table, {k: tidy(v) for k, v in sol.items()},
                                    tuple(free), label=label)
    except UnderdeterminedSystemError as exc:
        missing = list(exc.free_candidates)
    names = [f"{prefix}{k}" for k in range(1, len(missing) + 1)]
    big = table.extended(names)
    moved = [e.to_table(big) for e in eqs]
    renamed = [m.subs(dict(zip(missing, (big.gen(n) for n in names)))) for m in moved]
    sol = linear_solve(renamed, [u for u in unknowns if u not in missing], free)
    out = {}
    for u in unknowns:
        if u in missing:
            out[u] = RationalFunction.coerce(big.gen(names[missing.index(u)]), big)
        elif u in sol:
            out[u] = tidy(sol[u])
    notes = [f"{u} is undetermined; renamed {n}" for u, n in zip(missing, names)]
    return FamilySolution.build(big, out, tuple(names) + tuple(free), label=label, notes=notes)


def quadratic_branches(eq: MultiPoly, var: str) -> List[RationalFunction]:
    """Both roots of ``eq = 0`` as a quadratic in ``var``.

    The discriminant must be a perfect square over Q[other variables];
    otherwise the roots are not rational functions and the solve stops.
    """
    coeffs = eq.coefficients_in([var])
    if any(k[0] > 2 for k in coeffs):
        raise NonlinearSystemError(f"degree in {var} exceeds 2")
    table = eq.table
    A = coeffs.get((2,), table.zero)
    B = coeffs.get((1,), table.zero)
    C = coeffs.get((0,), table.zero)
    if A.is_zero():
        if B.is_zero():
            raise NonlinearSystemError(f"{var} does not occur")
        return [tidy(RationalFunction(-C, B))]
    D = B * B - A * C * 4
    S = poly_sqrt(D)
    if S is None:
        raise NonlinearSystemError(f"discriminant in {var} is not a perfect square")
    roots = [tidy(RationalFunction(-B + S, A * 2)), tidy(RationalFunction(-B - S, A * 2))]
    if roots[0] == roots[1]:
        return roots[:1]
    return roots


# -- scenarios -----------------------------------------------------------------------

ORDER3_RECIPE = (
    (("h * Fx", "h^2 * Fxx"), ("b2", "b3")),
    (("F",), ("b1",)),
    (("h^2 * Fy*Fx",), ("a32",)),
    (("h^2 * Fy^2*F",), ("a21",)),
    (("h * Fy*F",), ("a31",)),
)


def solve_order3_family(cs: Optional[ConditionSet] = None) -> FamilySolution:
    """The order-3, three-stage family over Q(c2, c3).

    ``cs`` is the general (non-autonomous) condition set without the
    row-sum substitution; the solve recovers ``a21 = c2`` and
    ``a31 + a32 = c3`` by itself.
    """
    cs = cs or generate_conditions(3, 3)
    if (cs.stages, cs.order, cs.mode, cs.row_sum) != (3, 3, "general", False):
        raise ValueError("expected the general 3-stage, order-3 conditions without row-sum")
    eqs, labels = list(cs.equations), list(cs.labels)
    stages, used = [], set()
    for labs, unknowns in ORDER3_RECIPE:
        idx = [_label_index(cs, lab) for lab in labs]
        used.update(idx)
        stages.append((idx, unknowns))
    sol = staged_solve(eqs, stages, labels)
    rest = [i for i in range(len(eqs)) if i not in used]
    checked = verify_residuals(sol, [eqs[i] for i in rest], [labels[i] for i in rest])
    order = ["a21", "a31", "a32", "b1", "b2", "b3"]
    return FamilySolution.build(cs.table, {k: sol[k] for k in order}, ("c2", "c3"), checked,
                                label="order 3, 3 stages")


def _row_sum_values(sol: Mapping[str, RationalFunction], table: VarTable, s: int,
                    c: Mapping[str, object]) -> Dict[str, RationalFunction]:
    """``a_i1 = c_i - sum_{j>=2} a_ij`` evaluated on a solution."""
    out = {}
    for i in range(2, s + 1):
        ci = c.get(f"c{i}", table.gen(f"c{i}"))
        acc = RationalFunction.coerce(ci, table)
        for j in range(2, i):
            acc = acc - sol[a_name(i, j)]
        out[a_name(i, 1)] = acc
    return tidy_map(out | dict(sol))


def order4_basis(cs: Optional[ConditionSet] = None) -> Tuple[List[MultiPoly], bool]:
    """Interreduced order-4 system (lex) and whether ``c4 - 1`` lies in its ideal."""
    cs = cs or generate_conditions(4, 4, row_sum=True)
    ib = interreduce(list(cs.equations), LEX)
    gb = buchberger(ib, GREVLEX)
    c4 = cs.table.gen("c4")
    return ib, poly_reduce(c4 - 1, gb, GREVLEX).is_zero()


def _split_stages(eqs: Sequence[MultiPoly], a_names: Sequence[str]):
    """(a-free equations, equations linear in the a's, the rest)."""
    free_of_a, linear, rest = [], [], []
    for i, e in enumerate(eqs):
        vs = set(e.variables())
        if not vs & set(a_names):
            free_of_a.append(i)
        elif is_linear_in(e, a_names):
            linear.append(i)
        else:
            rest.append(i)
    return free_of_a, linear, rest


def solve_order4_family(cs: Optional[ConditionSet] = None,
                        source: Optional[ConditionSet] = None) -> FamilySolution:
    """The classical order-4, four-stage family over Q(c2, c3).

    Steps: interreduce the row-sum system, confirm ``c4 - 1`` is in the
    ideal, set ``c4 = 1``; the a-free equations give the weights, the
    equations linear in ``a32, a42, a43`` give those, and what remains is
    checked.  The returned map also carries ``a21, a31, a41`` and ``c4``
    and is verified against ``source`` (default: the 19 raw equations).
    """
    cs = cs or generate_conditions(4, 4, row_sum=True)
    table = cs.table
    ib, c4_is_one = order4_basis(cs)
    if not c4_is_one:
        raise ResidualError("c4 - 1", RationalFunction.coerce(table.gen("c4") - 1, table))
    eqs = [e.subs({"c4": 1}) for e in ib]
    labels = [str(e) for e in ib]
    a_vars = ["a32", "a42", "a43"]
    bidx, aidx, rest = _split_stages(eqs, a_vars)
    sol = staged_solve(eqs, [(bidx, ["b1", "b2", "b3", "b4"]), (aidx, a_vars)], labels)
    checked = verify_residuals(sol, [eqs[i] for i in rest], [labels[i] for i in rest])
    sol.update(_row_sum_values(sol, table, 4, {"c4": 1}))
    sol["c4"] = RationalFunction.coerce(1, table)
    source = source or generate_conditions(4, 4, table=table)
    bad = FamilySolution.build(table, sol, ()).check(source.equations)
    if bad:
        raise ResidualError(source.labels[bad[0]], substitute(source.equations[bad[0]], sol))
    order = ["a21", "a31", "a32", "a41", "a42", "a43", "b1", "b2", "b3", "b4", "c4"]
    return FamilySolution.build(table, {k: sol[k] for k in order}, ("c2", "c3"),
                                tuple(checked) + tuple(f"raw: {lab}" for lab in source.labels),
                                label="order 4, 4 stages")


def equal_node_system(table: Optional[VarTable] = None) -> ConditionSet:
    """Row-sum order-4 conditions with ``c2 = c3 = u`` and ``c4 = 1``."""
    table = table or rk_vars(4, extra=("u", "r1"))
    u = table.gen("u")
    return generate_conditions(4, 4, row_sum=True, subs={"c2": u, "c3": u, "c4": 1}, table=table)


def solve_order4_equal_c(cs: Optional[ConditionSet] = None) -> FamilySolution:
    """The order-4 family with ``c2 = c3 = u``; ``u`` is forced to 1/2.

    The weights are not all determined (b2 and b3 enter only through their
    sum); the full weight solve is attempted first, and on failure retried
    with ``b2`` renamed to the parameter ``r1``.
    """
    cs = cs or equal_node_system()
    table = cs.table
    if "r1" not in table:
        raise ValueError("the variable table must contain r1")
    ib = interreduce(list(cs.equations), LEX)
    labels = [str(e) for e in ib]
    uidx = [i for i, e in enumerate(ib) if set(e.variables()) == {"u"}]
    sol = staged_solve(ib, [(uidx, ["u"])], labels)
    bidx = [i for i, e in enumerate(ib) if set(e.variables()) <= {"b1", "b2", "b3", "b4"}]
    notes = []
    try:
        part = linear_solve([ib[i] for i in bidx], ["b1", "b2", "b3", "b4"])
    except UnderdeterminedSystemError as exc:
        notes.append(f"weight system singular; free candidates {', '.join(exc.free_candidates)}; "
                     "retrying with b2 = r1")
        eqs_b = [ib[i].subs({"b2": table.gen("r1")}) for i in bidx]
        part = linear_solve(eqs_b, ["b1", "b3", "b4"])
        part["b2"] = RationalFunction.coerce(table.gen("r1"), table)
    sol.update({k: tidy(v) for k, v in part.items()})
    # a32 from the product with b3, then a43, then a42
    remaining = [i for i in range(len(ib)) if i not in bidx and i not in uidx]
    order = []
    for var in ("a32", "a43", "a42"):
        for i in remaining:
            e = substitute(ib[i], sol).num
            if var in e.variables() and set(e.variables()) <= {var, "r1"} and is_linear_in(e, [var]):
                sol[var] = tidy(linear_solve([e], [var])[var])
                order.append(i)
                break
        else:
            raise NonlinearSystemError(f"no equation determines {var}")
    left = [i for i in remaining if i not in order]
    checked = verify_residuals(sol, [ib[i] for i in left], [labels[i] for i in left])
    checked += verify_residuals(sol, list(cs.equations), list(cs.labels))
    sol.update(_row_sum_values(sol, table, 4, {"c2": sol["u"], "c3": sol["u"], "c4": 1}))
    keys = ["u", "a21", "a31", "a32", "a41", "a42", "a43", "b1", "b2", "b3", "b4"]
    return FamilySolution.build(table, {k: sol[k] for k in keys}, ("r1",), checked,
                                label="order 4, 4 stages, c2 = c3", notes=notes)


def solve_order4_autonomous(cs: Optional[ConditionSet] = None) -> List[FamilySolution]:
    """Solve the 7-equation autonomous system (row-sum applied, ``c4 = 1``).

    The weights come from the four a-free equations.  Two of the remaining
    equations are linear in ``a32, a42, a43`` and the third is quadratic,
    so there are two branches; both are returned, each verified against
    all seven equations.
    """
    cs = cs or generate_conditions(4, 4, autonomous=True, row_sum=True)
    table = cs.table
    eqs = [e.subs({"c4": 1}) for e in cs.equations]
    labels = list(cs.labels)
    a_vars = ["a32", "a42", "a43"]
    bidx, aidx, rest = _split_stages(eqs, a_vars)
    sol = staged_solve(eqs, [(bidx, ["b1", "b2", "b3", "b4"])], labels)
    # a42, a43 in terms of a32 from the linear pair
    lin = linear_solve([substitute(eqs[i], sol) for i in aidx], ["a42", "a43"])
    sol.update({k: tidy(v) for k, v in lin.items()})
    if len(rest) != 1:
        raise NonlinearSystemError(f"expected one quadratic equation, found {len(rest)}")
    quad = substitute(eqs[rest[0]], sol).num
    out = []
    for k, root in enumerate(quadratic_branches(quad, "a32"), start=1):
        branch = dict(sol)
        branch["a32"] = root
        branch = _close(branch)
        checked = verify_residuals(branch, eqs, labels)
        branch.update(_row_sum_values(branch, table, 4, {"c4": 1}))
        branch["c4"] = RationalFunction.coerce(1, table)
        keys = ["a21", "a31", "a32", "a41", "a42", "a43", "b1", "b2", "b3", "b4", "c4"]
        out.append(FamilySolution.build(table, {k2: branch[k2] for k2 in keys}, ("c2", "c3"), checked,
                                        label=f"order 4 autonomous, branch {k}"))
    return out
