"""Light-weight factor peeling and exact square roots.

Full multivariate factorization is out of reach here.  What the
coefficient families need is much smaller: splitting a denominator into
its monomial part, linear factors ``v - w`` and ``v - r`` (``r``
rational), and one leftover cofactor; and recognising perfect squares.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple

from .poly import GRLEX, MultiPoly
from .ratfunc import exact_quotient


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(coeffs: List[Fraction]) -> List[Fraction]:
    """Rational roots of ``sum coeffs[k] * x**k`` (coefficients low to high)."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    roots = []
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    if len(coeffs) < 2:
        return roots
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if r not in roots and sum(c * r ** k for k, c in enumerate(ints)) == 0:
                    roots.append(r)
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _linear_candidates(p: MultiPoly, name: str) -> List[MultiPoly]:
    """Factors ``name - w`` and ``name - r`` that divide ``p``."""
    table = p.table
    v = table.gen(name)
    found = []
    for other in p.variables():
        if other != name and p.subs({name: table.gen(other)}).is_zero():
            found.append(v - table.gen(other))
    # v - r divides p iff p(v=r) vanishes, so r is a root of the
    # univariate coefficient slice of every monomial in the other variables
    slices = {}
    for e, c in p.terms.items():
        k = e[table.index(name)]
        rest = tuple(0 if i == table.index(name) else x for i, x in enumerate(e))
        slices.setdefault(rest, {})[k] = c
    best = min(slices.values(), key=lambda d: (max(d) - min(d), len(d)))
    if len(best) > 1:
        hi = max(best)
        roots = rational_roots([best.get(k, Fraction(0)) for k in range(hi + 1)])
        for r in roots:
            if r != 0 and p.subs({name: r}).is_zero():
                found.append(v - r)
    return found


def split_factors(p: MultiPoly, hints: Sequence[MultiPoly] = ()) -> Tuple[Fraction, List[Tuple[MultiPoly, int]]]:
    """``p = const * prod(f ** k)`` with primitive factors.

    The factors are variables, linear binomials ``v - w`` / ``v - r``, any
    of the non-constant ``hints`` that divide exactly, and at most one
    leftover cofactor that the peeling could not break further (it is not
    claimed to be irreducible).
    """
    if p.is_zero():
        raise ValueError("cannot split the zero polynomial")
    table = p.table
    factors: dict = {}
    order: List[MultiPoly] = []

    def note(f: MultiPoly, k: int = 1):
        f = f.primitive(GRLEX)
        if f not in factors:
            factors[f] = 0
            order.append(f)
        factors[f] += k

    rest = p
    # monomial content
    lo = None
    for e in rest.terms:
        lo = e if lo is None else tuple(min(a, b) for a, b in zip(lo, e))
    for i, k in enumerate(lo or ()):
        if k:
            note(table.gen(table.names[i]), k)
            rest = MultiPoly._raw(table, {tuple(x - (k if j == i else 0) for j, x in enumerate(e)): c
                                          for e, c in rest.terms.items()})
    changed = True
    while changed and not rest.is_constant():
        changed = False
        for name in rest.variables():
            for cand in _linear_candidates(rest, name):
                q = exact_quotient(rest, cand)
                while q is not None:
                    note(cand)
                    rest = q
                    changed = True
                    q = exact_quotient(rest, cand) if not rest.is_constant() else None
            if changed:
                break
    for h in hints:
        if h.is_constant() or rest.is_constant() or h.total_degree() > rest.total_degree():
            continue
        q = exact_quotient(rest, h)
        while q is not None:
            note(h)
            rest = q
            q = exact_quotient(rest, h) if not rest.is_constant() else None
    if not rest.is_constant():
        note(rest)
    prod = table.one
    for f in order:
        prod = prod * f ** factors[f]
    # leading coefficients are multiplicative
    const = p.leading_coefficient(GRLEX) / prod.leading_coefficient(GRLEX)
    return const, [(f, factors[f]) for f in order]


def _sqrt_fraction(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def poly_sqrt(p: MultiPoly) -> Optional[MultiPoly]:
    """``q`` with ``q*q == p`` and positive leading coefficient, or ``None``.

    Term-by-term extraction in graded-lex order: each new term is the
    leading term of the current remainder divided by twice the leading
    term of the root.
    """
    table = p.table
    if p.is_zero():
        return p
    lm, lc = p.leading_term(GRLEX)
    if any(x % 2 for x in lm):
        return None
    c0 = _sqrt_fraction(lc)
    if c0 is None:
        return None
    head = tuple(x // 2 for x in lm)
    q = MultiPoly._raw(table, {head: c0})
    low = min(sum(e) for e in p.terms)
    rem = p - q * q
    while not rem.is_zero():
        m, c = rem.leading_term(GRLEX)
        shift = tuple(a - b for a, b in zip(m, head))
        if any(x < 0 for x in shift):
            return None
        t = MultiPoly._raw(table, {shift: c / (2 * c0)})
        if 2 * sum(shift) < low:
            return None
        rem = rem - (q * 2 + t) * t
        q = q + t
    return q
