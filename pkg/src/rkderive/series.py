"""Truncated Taylor expansion of Runge-Kutta stages for y' = f(x, y).

A partial derivative of f is a pair ``(dx, dy)``; ``(0, 0)`` is f.  An
elementary-differential monomial is a sorted tuple of
``((dx, dy), exponent)`` pairs, e.g. ``(((0, 1), 2), ((0, 0), 1))`` is
``Fy^2*F``.  A :class:`TruncatedSeries` maps ``(h_power, monomial)`` to a
polynomial in the method coefficients and drops every power of ``h`` at
or above its cutoff.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import MultiPoly, VarTable

DerivSymbol = Tuple[int, int]
DiffMonomial = Tuple[Tuple[DerivSymbol, int], ...]

ONE: DiffMonomial = ()
F: DiffMonomial = (((0, 0), 1),)


class UnsupportedStructureError(ValueError):
    """The coefficient matrix is not strictly lower triangular."""


def symbol_name(sym: DerivSymbol) -> str:
    dx, dy = sym
    return "F" + "x" * dx + "y" * dy


def _sym_key(sym: DerivSymbol):
    # higher derivatives first, x before y: Fyy, Fxy, Fxx, Fy, Fx, F
    dx, dy = sym
    return (-(dx + dy), -dy)


def dm_mul(a: DiffMonomial, b: DiffMonomial) -> DiffMonomial:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for s, k in b:
        acc[s] = acc.get(s, 0) + k
    return tuple(sorted(acc.items(), key=lambda sk: _sym_key(sk[0])))


def dm_of(*factors: DerivSymbol) -> DiffMonomial:
    out: DiffMonomial = ONE
    for s in factors:
        out = dm_mul(out, ((s, 1),))
    return out


def dm_weight(dm: DiffMonomial) -> int:
    """Order of the elementary differential (its h-power plus one)."""
    return sum((dx + dy) * k for (dx, dy), k in dm) - sum(k for _, k in dm) + 1


def dm_sort_key(dm: DiffMonomial):
    return tuple((_sym_key(s), -k) for s, k in dm)


def dm_str(dm: DiffMonomial) -> str:
    if not dm:
        return "1"
    return "*".join(symbol_name(s) + (f"^{k}" if k > 1 else "") for s, k in dm)


def parse_dm(text: str) -> DiffMonomial:
    """Inverse of :func:`dm_str`, e.g. ``"Fy^2*F"``."""
    text = text.strip()
    if text == "1":
        return ONE
    out: DiffMonomial = ONE
    for part in text.split("*"):
        name, _, k = part.strip().partition("^")
        if not name.startswith("F") or set(name[1:]) - {"x", "y"} or name[1:] != "".join(sorted(name[1:])):
            raise ValueError(f"not a derivative symbol: {name!r}")
        sym = (name.count("x"), name.count("y"))
        out = dm_mul(out, ((sym, int(k) if k else 1),))
    return out


class DiffPoly:
    """Polynomial in derivative symbols with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[DiffMonomial, object] = ()):
        self.terms = {m: Fraction(c) for m, c in dict(terms).items() if c}

    @classmethod
    def symbol(cls, dx: int = 0, dy: int = 0) -> "DiffPoly":
        return cls({dm_of((dx, dy)): 1})

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return DiffPoly(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other) -> "DiffPoly":
        if not isinstance(other, DiffPoly):
            return DiffPoly({m: c * Fraction(other) for m, c in self.terms.items()})
        out: Dict[DiffMonomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = dm_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return DiffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DiffPoly":
        out = DiffPoly({ONE: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, DiffPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def total_derivative(self, autonomous: bool = False) -> "DiffPoly":
        """d/dx along solutions, with y' replaced by F.

        Each symbol F_(i,j) maps to F_(i+1,j) + F_(i,j+1)*F; in
        autonomous mode only the second part survives.
        """
        out: Dict[DiffMonomial, Fraction] = {}
        for m, c in self.terms.items():
            for idx, ((dx, dy), k) in enumerate(m):
                rest = m[:idx] + ((((dx, dy), k - 1),) if k > 1 else ()) + m[idx + 1:]
                images = [dm_of((dx, dy + 1), (0, 0))]
                if not autonomous:
                    images.append(dm_of((dx + 1, dy)))
                for img in images:
                    nm = dm_mul(rest, img)
                    out[nm] = out.get(nm, 0) + c * k
        return DiffPoly(out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=dm_sort_key):
            c = self.terms[m]
            body = dm_str(m)
            if abs(c) != 1:
                body = f"{abs(c)}*{body}"
            parts.append((" - " if c < 0 else " + ") if parts else ("-" if c < 0 else ""))
            parts.append(body)
        return "".join(parts)

    __repr__ = __str__


def total_derivatives(p: int, autonomous: bool = False) -> List[DiffPoly]:
    """``[F1, ..., F_{p-1}]``: the successive total derivatives of f."""
    out = []
    cur = DiffPoly.symbol()
    for _ in range(1, p):
        cur = cur.total_derivative(autonomous)
        out.append(cur)
    return out


Key = Tuple[int, DiffMonomial]


class TruncatedSeries:
    """Series in h with coefficients attached to elementary differentials."""

    __slots__ = ("table", "cutoff", "terms")

    def __init__(self, table: VarTable, cutoff: int, terms: Optional[Mapping[Key, MultiPoly]] = None):
        self.table = table
        self.cutoff = cutoff
        self.terms: Dict[Key, MultiPoly] = {}
        for (hp, dm), c in (terms or {}).items():
            if hp < cutoff and c:
                self.terms[(hp, dm)] = c

    @classmethod
    def constant(cls, table, cutoff, coeff, h_power: int = 0, dm: DiffMonomial = ONE):
        if not isinstance(coeff, MultiPoly):
            coeff = table.const(coeff)
        return cls(table, cutoff, {(h_power, dm): coeff})

    @classmethod
    def from_diffpoly(cls, table, cutoff, dp: DiffPoly, h_power: int = 0, scale=1):
        return cls(table, cutoff, {(h_power, m): table.const(c * Fraction(scale)) for m, c in dp.terms.items()})

    def _check(self, other: "TruncatedSeries"):
        if other.table != self.table or other.cutoff != self.cutoff:
            raise ValueError("series with different rings or cutoffs")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out[k] + c if k in out else c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return TruncatedSeries(self.table, self.cutoff, out)

    def __neg__(self):
        return TruncatedSeries(self.table, self.cutoff, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check(other)
            out: Dict[Key, MultiPoly] = {}
            for (h1, m1), c1 in self.terms.items():
                for (h2, m2), c2 in other.terms.items():
                    hp = h1 + h2
                    if hp >= self.cutoff:
                        continue
                    k = (hp, dm_mul(m1, m2))
                    out[k] = out[k] + c1 * c2 if k in out else c1 * c2
            return TruncatedSeries(self.table, self.cutoff, out)
        # scalar or coefficient polynomial
        return TruncatedSeries(self.table, self.cutoff, {k: c * other for k, c in self.terms.items()})

    __rmul__ = __mul__

    def times(self, h_power: int = 0, dm: DiffMonomial = ONE) -> "TruncatedSeries":
        """Multiply by ``h**h_power`` times an elementary differential."""
        return TruncatedSeries(self.table, self.cutoff,
                               {(hp + h_power, dm_mul(m, dm)): c for (hp, m), c in self.terms.items()})

    def __pow__(self, k: int) -> "TruncatedSeries":
        out = TruncatedSeries.constant(self.table, self.cutoff, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.cutoff == other.cutoff
                and self.terms == other.terms)

    def truncate(self, cutoff: int) -> "TruncatedSeries":
        return TruncatedSeries(self.table, min(cutoff, self.cutoff), self.terms)

    def min_h_power(self) -> int:
        return min((hp for hp, _ in self.terms), default=self.cutoff)

    def coefficient(self, h_power: int, dm: DiffMonomial) -> MultiPoly:
        return self.terms.get((h_power, dm), self.table.zero)

    def subs(self, mapping) -> "TruncatedSeries":
        return TruncatedSeries(self.table, self.cutoff, {k: c.subs(mapping) for k, c in self.terms.items()})

    def drop_x_derivatives(self) -> "TruncatedSeries":
        return TruncatedSeries(self.table, self.cutoff,
                               {(hp, m): c for (hp, m), c in self.terms.items()
                                if all(dx == 0 for (dx, _), _k in m)})

    def sorted_keys(self) -> List[Key]:
        return sorted(self.terms, key=lambda k: (k[0], dm_sort_key(k[1])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for hp, m in self.sorted_keys():
            h = "" if hp == 0 else ("h" if hp == 1 else f"h^{hp}")
            head = "*".join(x for x in (h, dm_str(m) if m else "") if x) or "1"
            parts.append(f"({self.terms[(hp, m)]})*{head}")
        return " + ".join(parts)


def taylor_target(p: int, table: VarTable, autonomous: bool = False) -> TruncatedSeries:
    """``F + sum_k h^k/(k+1)! F_k`` with cutoff ``p``: the exact increment per unit h."""
    out = TruncatedSeries.from_diffpoly(table, p, DiffPoly.symbol())
    for k, Fk in enumerate(total_derivatives(p, autonomous), 1):
        out = out + TruncatedSeries.from_diffpoly(table, p, Fk, h_power=k, scale=Fraction(1, factorial(k + 1)))
    return out


def stage_template(p: int, autonomous: bool = False
                   ) -> Callable[[TruncatedSeries, TruncatedSeries], TruncatedSeries]:
    """Taylor polynomial of f(x + dx_off, y + dy_off) to total offset degree p - 1."""
    deg = p - 1

    def template(x_off: TruncatedSeries, y_off: TruncatedSeries) -> TruncatedSeries:
        for off in (x_off, y_off):
            if off.min_h_power() < 1:
                raise ValueError("stage offsets must be O(h)")
        table, cutoff = y_off.table, y_off.cutoff
        if autonomous and x_off.terms:
            raise ValueError("autonomous expansion takes no x offset")
        xp = [TruncatedSeries.constant(table, cutoff, 1)]
        yp = [TruncatedSeries.constant(table, cutoff, 1)]
        for _ in range(deg):
            xp.append(xp[-1] * x_off)
            yp.append(yp[-1] * y_off)
        out = TruncatedSeries(table, cutoff)
        for m in range(0, deg + 1):
            if autonomous and m:
                break
            for n in range(0, deg + 1 - m):
                term = xp[m] * yp[n]
                if not term.terms:
                    continue
                w = Fraction(1, factorial(m) * factorial(n))
                out = out + (term * w).times(0, dm_of((m, n)))
        return out

    return template


def _as_poly(table: VarTable, v) -> MultiPoly:
    if isinstance(v, MultiPoly):
        return v.to_table(table) if v.table != table else v
    return table.const(v)


def lower_rows(a: Sequence[Sequence], s: int) -> List[List]:
    """Normalize ``a`` to ragged rows ``a[i][:i]``; reject nonzero entries on/above the diagonal."""
    rows = []
    for i in range(s):
        row = list(a[i]) if i < len(a) else []
        for j in range(i, len(row)):
            v = row[j]
            if (isinstance(v, MultiPoly) and v) or (not isinstance(v, MultiPoly) and v != 0):
                raise UnsupportedStructureError(f"a[{i + 1}][{j + 1}] = {v} is on or above the diagonal")
        rows.append(row[:i] + [0] * (i - len(row[:i])))
    return rows


def expand_stages(a: Sequence[Sequence], c: Sequence, p: int, table: VarTable,
                  autonomous: bool = False) -> List[TruncatedSeries]:
    """Stage series ``k_1..k_s`` with cutoff ``p``, nested stages substituted.

    ``a`` rows may be ragged (row i holding a_i1..a_i,i-1) or a full
    square matrix with zeros on and above the diagonal.  Entries are
    polynomials over ``table`` or rationals.
    """
    s = len(c)
    rows = lower_rows(a, s)
    template = stage_template(p, autonomous)
    zero = TruncatedSeries(table, p)
    ks: List[TruncatedSeries] = []
    for i in range(s):
        acc = zero
        for j in range(i):
            coeff = _as_poly(table, rows[i][j])
            if coeff:
                acc = acc + ks[j] * coeff
        y_off = acc.times(1)
        x_off = zero if autonomous else TruncatedSeries.constant(table, p, _as_poly(table, c[i]), h_power=1)
        ks.append(template(x_off, y_off))
    return ks


def combine(weights: Sequence, stages: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """``sum w_i k_i``."""
    table = stages[0].table
    out = TruncatedSeries(table, stages[0].cutoff)
    for w, k in zip(weights, stages):
        w = _as_poly(table, w)
        if w:
            out = out + k * w
    return out


def collect_difference(T: TruncatedSeries, RK: TruncatedSeries) -> Dict[Key, MultiPoly]:
    """Nonzero coefficients of ``T - RK`` keyed by ``(h_power, monomial)``, in canonical order."""
    d = T - RK
    return {k: d.terms[k] for k in d.sorted_keys()}
