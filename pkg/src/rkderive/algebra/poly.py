"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Callable, Dict, Iterable, Iterator, Mapping, Tuple

Exps = Tuple[int, ...]


class RingMismatchError(ValueError):
    """Raised when polynomials from different variable tables are combined."""


class VarTable:
    """An ordered, immutable list of variable names.

    The position of a name fixes its rank in every monomial order: the
    first variable is the largest.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarTable({', '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def gen(self, name: str) -> "MultiPoly":
        e = [0] * len(self.names)
        e[self.index(name)] = 1
        return MultiPoly._raw(self, {tuple(e): Fraction(1)})

    def gens(self) -> Tuple["MultiPoly", ...]:
        return tuple(self.gen(n) for n in self.names)

    def const(self, value) -> "MultiPoly":
        value = Fraction(value)
        if not value:
            return MultiPoly._raw(self, {})
        return MultiPoly._raw(self, {(0,) * len(self.names): value})

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly._raw(self, {})

    @property
    def one(self) -> "MultiPoly":
        return self.const(1)

    def extended(self, extra: Iterable[str]) -> "VarTable":
        """Return a table with ``extra`` names appended (existing ones skipped)."""
        return VarTable(self.names + tuple(n for n in extra if n not in self._index))


class MonomialOrder:
    """A term order given by a sort key on exponent vectors (larger key = larger)."""

    __slots__ = ("name", "key")

    def __init__(self, name: str, key: Callable[[Exps], tuple]):
        self.name = name
        self.key = key

    def __repr__(self):
        return f"MonomialOrder({self.name!r})"


LEX = MonomialOrder("lex", lambda e: e)
GRLEX = MonomialOrder("grlex", lambda e: (sum(e), e))
GREVLEX = MonomialOrder("grevlex", lambda e: (sum(e), tuple(-x for x in reversed(e))))

ORDERS = {"lex": LEX, "grlex": GRLEX, "graded-lex": GRLEX, "grevlex": GREVLEX}


def monomial_divides(a: Exps, b: Exps) -> bool:
    """True when monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Exps, b: Exps) -> Exps:
    return tuple(x if x > y else y for x, y in zip(a, b))


def monomial_quotient(a: Exps, b: Exps) -> Exps:
    return tuple(x - y for x, y in zip(a, b))


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) or isinstance(x, Rational)


class MultiPoly:
    """Polynomial over Q as a map exponent-vector -> nonzero Fraction.

    Values are treated as immutable; every operation returns a new object.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Mapping[Exps, object] = ()):
        n = len(table)
        clean = {}
        for e, c in dict(terms).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent vector {e} does not match {table}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.table = table
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _raw(cls, table: VarTable, terms: Dict[Exps, Fraction]) -> "MultiPoly":
        obj = object.__new__(cls)
        obj.table = table
        obj.terms = terms
        return obj

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.table != self.table:
                raise RingMismatchError(f"{self.table} vs {other.table}")
            return other
        if _is_scalar(other):
            return self.table.const(other)
        return NotImplemented

    # -- structure --------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.table), Fraction(0))

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Exps, Fraction]]:
        return iter(self.terms.items())

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.table.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> Tuple[str, ...]:
        """Names that actually occur, in table order."""
        used = [False] * len(self.table)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(n for n, u in zip(self.table.names, used) if u)

    def leading_term(self, order: MonomialOrder = LEX) -> Tuple[Exps, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def leading_monomial(self, order: MonomialOrder = LEX) -> Exps:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder = LEX) -> Fraction:
        return self.leading_term(order)[1]

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return MultiPoly._raw(self.table, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.table, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if _is_scalar(other) and not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return MultiPoly._raw(self.table, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = self.table.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        if not c:
            return self.table.zero
        return MultiPoly._raw(self.table, {e: v * c for e, v in self.terms.items()})

    def mul_term(self, exps: Exps, coeff) -> "MultiPoly":
        coeff = Fraction(coeff)
        if not coeff:
            return self.table.zero
        return MultiPoly._raw(
            self.table,
            {tuple(a + b for a, b in zip(e, exps)): c * coeff for e, c in self.terms.items()},
        )

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.table == other.table and self.terms == other.terms
        if _is_scalar(other):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.table, frozenset(self.terms.items())))

    # -- normalization ----------------------------------------------------

    def monic(self, order: MonomialOrder = LEX) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coefficient(order))

    def primitive(self, order: MonomialOrder = GRLEX) -> "MultiPoly":
        """Scale to coprime integer coefficients with positive leading coefficient."""
        if not self.terms:
            return self
        from math import gcd

        den = 1
        for c in self.terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        num = 0
        for c in self.terms.values():
            num = gcd(num, (c * den).numerator)
        factor = Fraction(den, num)
        if self.leading_coefficient(order) < 0:
            factor = -factor
        return self.scale(factor)

    # -- substitution -----------------------------------------------------

    def subs(self, mapping: Mapping[str, object]) -> "MultiPoly":
        """Substitute scalars or same-table polynomials for named variables."""
        idx = {}
        for name, val in mapping.items():
            if name not in self.table:
                continue
            val = self._coerce(val)
            if val is NotImplemented:
                raise TypeError(f"cannot substitute {type(val).__name__} into a polynomial")
            idx[self.table.index(name)] = val
        if not idx:
            return self
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = idx[i] ** k
            return powers[key]

        out = self.table.zero
        for e, c in self.terms.items():
            rest = tuple(0 if i in idx else k for i, k in enumerate(e))
            term = MultiPoly._raw(self.table, {rest: c})
            for i in idx:
                if e[i]:
                    term = term * power(i, e[i])
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        """Evaluate at a point; every occurring variable must be given."""
        vals = []
        for n in self.table.names:
            vals.append(Fraction(values[n]) if n in values else None)
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    if v is None:
                        raise KeyError("missing value for a variable of the polynomial")
                    t *= v ** k
            total += t
        return total

    def to_table(self, table: VarTable) -> "MultiPoly":
        """Re-express in another table; every occurring variable must exist there."""
        if table == self.table:
            return self
        pos = [table.index(n) if any(e[i] for e in self.terms) else None
               for i, n in enumerate(self.table.names)]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(table)
            for i, k in enumerate(e):
                if k:
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return MultiPoly._raw(table, out)

    def coefficients_in(self, names: Iterable[str]) -> Dict[Exps, "MultiPoly"]:
        """Split into a map (exponents in ``names``) -> coefficient polynomial."""
        ids = [self.table.index(n) for n in names]
        out: Dict[Exps, Dict[Exps, Fraction]] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in ids)
            rest = list(e)
            for i in ids:
                rest[i] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: MultiPoly._raw(self.table, v) for k, v in out.items()}

    # -- text -------------------------------------------------------------

    def __str__(self):
        from .textform import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({self})"
