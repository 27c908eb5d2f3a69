"""Buchberger kernel on re-encoded exponent vectors.

Monomials are re-encoded so that native tuple comparison *is* the
monomial order and multiplication is componentwise addition:

* lex:     ``(e1, ..., en)``
* grlex:   ``(deg, e1, ..., en)``
* grevlex: ``(deg, -en, ..., -e1)``

Polynomials are plain dicts ``code -> rational``.  Coefficients use
``gmpy2.mpq`` when it is installed (it is several times faster than
``fractions.Fraction``) and fall back to ``Fraction`` otherwise.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from operator import add, ge, le, neg, sub
from typing import Dict, List, Sequence, Tuple

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

Poly = Dict[tuple, object]


class Encoding:
    """Encode/decode exponent vectors for one monomial order."""

    def __init__(self, kind: str):
        self.kind = kind
        if kind == "lex":
            self.off, self.sign = 0, 1
        elif kind == "grlex":
            self.off, self.sign = 1, 1
        elif kind == "grevlex":
            self.off, self.sign = 1, -1
        else:
            raise ValueError(f"unsupported monomial order {kind!r}")

    def encode(self, e: tuple) -> tuple:
        if self.kind == "lex":
            return tuple(e)
        if self.kind == "grlex":
            return (sum(e),) + tuple(e)
        return (sum(e),) + tuple(-x for x in reversed(e))

    def decode(self, m: tuple) -> tuple:
        if self.kind == "lex":
            return tuple(m)
        if self.kind == "grlex":
            return tuple(m[1:])
        return tuple(-x for x in reversed(m[1:]))

    def degree(self, m: tuple) -> int:
        return m[0] if self.off else sum(m)

    def divides(self, a: tuple, b: tuple) -> bool:
        off = self.off
        return all(map(le if self.sign > 0 else ge, a[off:], b[off:]))

    def lcm(self, a: tuple, b: tuple) -> tuple:
        off = self.off
        pick = max if self.sign > 0 else min
        body = tuple(map(pick, a[off:], b[off:]))
        if off:
            return (self.sign * sum(body),) + body
        return body

    def disjoint(self, a: tuple, b: tuple) -> bool:
        off = self.off
        return not any(x and y for x, y in zip(a[off:], b[off:]))


def encode_poly(terms: Dict[tuple, Fraction], enc: Encoding) -> Poly:
    return {enc.encode(e): Q(c.numerator, c.denominator) for e, c in terms.items()}


def decode_poly(p: Poly, enc: Encoding) -> Dict[tuple, Fraction]:
    return {enc.decode(m): Fraction(int(c.numerator), int(c.denominator)) for m, c in p.items()}


def monic(p: Poly) -> Poly:
    if not p:
        return p
    lc = p[max(p)]
    if lc == 1:
        return p
    inv = 1 / lc
    return {m: c * inv for m, c in p.items()}


def reduce(p: Poly, basis: Sequence[Tuple[tuple, Poly]], enc: Encoding,
           full: bool = True) -> Poly:
    """Remainder of ``p`` modulo monic ``basis`` (pairs ``(lm, poly)``).

    Among the elements whose leading monomial divides the current term
    the shortest one is used, which keeps intermediate coefficients
    small.  With ``full=False`` only the head is reduced.
    """
    g = dict(p)
    if not g or not basis:
        return g
    off = enc.off
    cmp = le if enc.sign > 0 else ge
    prepared = []
    for lm, f in sorted(basis, key=lambda t: len(t[1])):
        tail = [(fm, fc) for fm, fc in f.items() if fm != lm]
        prepared.append((lm[off:], enc.degree(lm), lm, tail))
    heap = [tuple(map(neg, m)) for m in g]
    heapq.heapify(heap)
    pop, push = heapq.heappop, heapq.heappush
    rem: Poly = {}
    while heap:
        m = tuple(map(neg, pop(heap)))
        c = g.pop(m, None)
        if c is None:
            continue
        body = m[off:]
        dm = enc.degree(m)
        for lbody, ld, lm, tail in prepared:
            if ld <= dm and all(map(cmp, lbody, body)):
                break
        else:
            rem[m] = c
            if not full:
                rem.update(g)
                return rem
            continue
        shift = tuple(map(sub, m, lm))
        for fm, fc in tail:
            t = tuple(map(add, fm, shift))
            v = g.get(t)
            if v is None:
                g[t] = -c * fc
                push(heap, tuple(map(neg, t)))
            else:
                v -= c * fc
                if v:
                    g[t] = v
                else:
                    del g[t]
    return rem


def echelon(gens: Sequence[Poly]) -> List[Poly]:
    """Reduced row echelon form of the linear span of ``gens``.

    Polynomials are treated as coefficient vectors indexed by monomials
    (largest first).  The output spans the same vector space, hence the
    same ideal, and depends only on that space.
    """
    rows: Dict[tuple, Poly] = {}
    for p in gens:
        g = dict(p)
        while g:
            lm = max(g)
            piv = rows.get(lm)
            if piv is None:
                break
            c = g[lm]
            for m, v in piv.items():
                w = g.get(m, 0) - c * v
                if w:
                    g[m] = w
                else:
                    g.pop(m, None)
        if not g:
            continue
        g = monic(g)
        lm = max(g)
        for key, r in rows.items():
            c = r.get(lm)
            if c:
                for m, v in g.items():
                    w = r.get(m, 0) - c * v
                    if w:
                        r[m] = w
                    else:
                        r.pop(m, None)
        rows[lm] = g
    # clear remaining entries above the pivots
    changed = True
    while changed:
        changed = False
        for key, r in rows.items():
            for m in list(r):
                if m != key and m in rows and r.get(m):
                    c = r[m]
                    for mm, v in rows[m].items():
                        w = r.get(mm, 0) - c * v
                        if w:
                            r[mm] = w
                        else:
                            r.pop(mm, None)
                    changed = True
    return [rows[k] for k in sorted(rows)]


def groebner(gens: Sequence[Poly], enc: Encoding) -> List[Poly]:
    """Reduced Groebner basis, monic, sorted by decreasing leading monomial.

    The generators are first brought to reduced row echelon form, so the
    run depends only on their linear span.  Pairs are chosen by the normal
    strategy (smallest lcm first) and pruned by the Gebauer-Moeller
    update, which applies Buchberger's coprime and chain criteria.  Every
    new element is fully reduced before it joins the basis.
    """
    polys: List[Poly] = []
    lms: List[tuple] = []
    active: List[int] = []
    pairs: Dict[Tuple[int, int], tuple] = {}
    lcm, divides, disjoint = enc.lcm, enc.divides, enc.disjoint

    def current():
        return [(lms[i], polys[i]) for i in active]

    def insert(f: Poly):
        nonlocal active
        f = monic(f)
        h = len(polys)
        polys.append(f)
        lh = max(f)
        lms.append(lh)
        cand = [(g, lcm(lh, lms[g])) for g in active]
        kept = []
        for idx, (g, l) in enumerate(cand):
            if disjoint(lh, lms[g]):
                kept.append((g, l, True))
                continue
            others = cand[idx + 1:] + [(k, lk) for k, lk, _ in kept]
            if not any(divides(lk, l) for _, lk in others):
                kept.append((g, l, False))
        for key in list(pairs):
            i, j = key
            lij = pairs[key]
            if divides(lh, lij) and lcm(lms[i], lh) != lij and lcm(lms[j], lh) != lij:
                del pairs[key]
        for g, l, coprime in kept:
            if not coprime:
                pairs[(g, h)] = l
        active = [g for g in active if not divides(lh, lms[g])] + [h]

    for p in echelon(gens):
        r = reduce(p, current(), enc)
        if r:
            insert(r)

    while pairs:
        key = min(pairs, key=lambda k: (pairs[k], k))
        l = pairs.pop(key)
        i, j = key
        si = tuple(map(sub, l, lms[i]))
        sj = tuple(map(sub, l, lms[j]))
        sp: Poly = {tuple(map(add, m, si)): c for m, c in polys[i].items()}
        for m, c in polys[j].items():
            t = tuple(map(add, m, sj))
            v = sp.get(t, 0) - c
            if v:
                sp[t] = v
            else:
                sp.pop(t, None)
        r = reduce(sp, current(), enc)
        if r:
            insert(r)

    basis = current()
    out = []
    for idx, (lm, f) in enumerate(basis):
        out.append(monic(reduce(f, basis[:idx] + basis[idx + 1:], enc)))
    out.sort(key=max, reverse=True)
    return out
