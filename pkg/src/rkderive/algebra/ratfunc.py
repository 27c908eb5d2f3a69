"""Quotients of multivariate polynomials.

No multivariate gcd is taken: equality and zero tests cross-multiply.
Only cheap cancellations are applied (monomial content, rational
content, and exact division of one part by the other).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping

from .poly import GRLEX, MultiPoly, RingMismatchError, VarTable, _is_scalar
from .groebner import divide


def exact_quotient(p: MultiPoly, d: MultiPoly):
    """``p / d`` when ``d`` divides ``p`` exactly, else ``None``."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return p
    if d.is_constant():
        return p / d.constant_term()
    if p.total_degree() < d.total_degree():
        return None
    (q,), r = divide(p, [d], GRLEX)
    return None if r else q


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None, *, _normalize: bool = True):
        if den is None:
            den = num.table.one
        if num.table != den.table:
            raise RingMismatchError(f"{num.table} vs {den.table}")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den
        if _normalize:
            self._normalize()

    @property
    def table(self) -> VarTable:
        return self.num.table

    def _normalize(self):
        num, den = self.num, self.den
        if num.is_zero():
            self.den = den.table.one
            return
        # common monomial factor
        lo = None
        for e in list(num.terms) + list(den.terms):
            lo = e if lo is None else tuple(min(a, b) for a, b in zip(lo, e))
        if any(lo):
            num = MultiPoly._raw(num.table, {tuple(a - b for a, b in zip(e, lo)): c for e, c in num.terms.items()})
            den = MultiPoly._raw(den.table, {tuple(a - b for a, b in zip(e, lo)): c for e, c in den.terms.items()})
        if not den.is_constant():
            q = exact_quotient(num, den)
            if q is not None:
                num, den = q, den.table.one
            elif num.total_degree() > 0 and num.total_degree() <= den.total_degree():
                q = exact_quotient(den, num)
                if q is not None:
                    num, den = num.table.one, q
        # make the denominator primitive with positive leading coefficient
        prim = den.primitive(GRLEX)
        factor = prim.leading_coefficient(GRLEX) / den.leading_coefficient(GRLEX)
        self.num = num.scale(factor)
        self.den = prim

    # -- construction helpers -----------------------------------------------

    @classmethod
    def coerce(cls, value, table: VarTable) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            if value.table != table:
                raise RingMismatchError(f"{value.table} vs {table}")
            return value
        if isinstance(value, MultiPoly):
            if value.table != table:
                raise RingMismatchError(f"{value.table} vs {table}")
            return cls(value, _normalize=False)
        if _is_scalar(value):
            return cls(table.const(value), _normalize=False)
        raise TypeError(f"cannot convert {type(value).__name__} to a rational function")

    def _c(self, other):
        try:
            return RationalFunction.coerce(other, self.table)
        except TypeError:
            return NotImplemented

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalize=False)

    def __add__(self, other):
        other = self._c(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._c(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._c(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._c(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._c(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by a zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._c(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den ** -k, self.num ** -k)
        return RationalFunction(self.num ** k, self.den ** k)

    # -- comparison -------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (RationalFunction, MultiPoly)) or _is_scalar(other):
            other = self._c(other)
            return self.num * other.den == other.num * self.den
        return NotImplemented

    def __hash__(self):
        # cross-multiplied equality admits no cheap canonical hash
        raise TypeError("RationalFunction is unhashable")

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> MultiPoly:
        if not self.den.is_constant():
            raise ValueError(f"{self} is not a polynomial")
        return self.num / self.den.constant_term()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_term() / self.den.constant_term()

    def variables(self):
        used = set(self.num.variables()) | set(self.den.variables())
        return tuple(n for n in self.table.names if n in used)

    # -- substitution -------------------------------------------------------------

    def subs(self, mapping: Mapping[str, object]) -> "RationalFunction":
        return substitute(self.num, mapping) / substitute(self.den, mapping)

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at {dict(values)}")
        return self.num.evaluate(values) / d

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        n = str(self.num)
        if len(self.num) > 1:
            n = f"({n})"
        d = str(self.den)
        if len(self.den) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFunction({self})"


def substitute(p: MultiPoly, mapping: Mapping[str, object]) -> RationalFunction:
    """Substitute rational functions (or polynomials, scalars) into ``p``.

    Uses one common denominator ``prod(den_v ** maxdeg_v)`` so no
    intermediate sums are formed.
    """
    table = p.table
    vals: Dict[int, RationalFunction] = {}
    for name, v in mapping.items():
        if name in table:
            vals[table.index(name)] = RationalFunction.coerce(v, table)
    if not vals:
        return RationalFunction(p, _normalize=False)
    maxdeg = {i: max((e[i] for e in p.terms), default=0) for i in vals}
    pw: Dict = {}

    def power(poly_key, i, k):
        key = (poly_key, i, k)
        if key not in pw:
            base = vals[i].num if poly_key == "n" else vals[i].den
            pw[key] = base ** k
        return pw[key]

    common = table.one
    for i, d in maxdeg.items():
        if d:
            common = common * power("d", i, d)
    total = table.zero
    for e, c in p.terms.items():
        rest = tuple(0 if i in vals else k for i, k in enumerate(e))
        term = MultiPoly._raw(table, {rest: c})
        for i in vals:
            k = e[i]
            if k:
                term = term * power("n", i, k)
            if maxdeg[i] - k:
                term = term * power("d", i, maxdeg[i] - k)
        total = total + term
    return RationalFunction(total, common)
