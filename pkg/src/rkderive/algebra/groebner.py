"""Multivariate division, Buchberger's algorithm and reduced Groebner bases."""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from . import _gbcore as _core
from ._gbcore import Encoding
from .poly import (
    GREVLEX,
    LEX,
    MonomialOrder,
    MultiPoly,
    RingMismatchError,
    monomial_divides,
    monomial_lcm,
    monomial_quotient,
)


def _check_ring(polys: Sequence[MultiPoly]):
    if not polys:
        return None
    table = polys[0].table
    for p in polys[1:]:
        if p.table != table:
            raise RingMismatchError(f"{table} vs {p.table}")
    return table


def _sub_multiple(g: Dict, f_terms: Dict, shift, coeff):
    """In place: g -= coeff * x^shift * f."""
    for e, c in f_terms.items():
        m = tuple(a + b for a, b in zip(e, shift))
        v = g.get(m, 0) - coeff * c
        if v:
            g[m] = v
        else:
            g.pop(m, None)


def divide(p: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder = LEX
           ) -> Tuple[List[MultiPoly], MultiPoly]:
    """Multivariate division: ``p = sum(q_i * basis_i) + r``.

    No term of ``r`` is divisible by a leading monomial of ``basis``.
    Zero basis elements are ignored (their quotient is zero).  When several
    leading monomials divide a term, the element with the fewest terms is
    used (ties go to the earlier one).
    """
    table = _check_ring([p, *basis])
    key = order.key
    heads = []
    for f in basis:
        if f.terms:
            lm, lc = f.leading_term(order)
            heads.append((lm, lc, f.terms))
        else:
            heads.append(None)
    search = sorted((i for i, h in enumerate(heads) if h is not None),
                    key=lambda i: (len(heads[i][2]), i))
    quots: List[Dict] = [{} for _ in basis]
    g = dict(p.terms)
    rem: Dict = {}
    while g:
        lm = max(g, key=key)
        lc = g[lm]
        for i in search:
            h = heads[i]
            if monomial_divides(h[0], lm):
                shift = monomial_quotient(lm, h[0])
                coeff = lc / h[1]
                quots[i][shift] = quots[i].get(shift, 0) + coeff
                _sub_multiple(g, h[2], shift, coeff)
                break
        else:
            rem[lm] = lc
            del g[lm]
    return [MultiPoly._raw(table, q) for q in quots], MultiPoly._raw(table, rem)


def poly_reduce(p: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder = LEX) -> MultiPoly:
    """Normal form of ``p`` modulo ``basis``: the remainder of :func:`divide`."""
    table = _check_ring([p, *basis])
    try:
        enc = Encoding(order.name)
    except ValueError:
        return divide(p, basis, order)[1]
    # same divisor choice as divide(), without tracking quotients
    ordered = sorted((f for f in basis if f), key=len)
    pack, unpack = _projection([p, *ordered])
    kb = [_core.monic(_core.encode_poly(pack(f.terms), enc)) for f in ordered]
    rem = _core.reduce(_core.encode_poly(pack(p.terms), enc), [(max(f), f) for f in kb], enc)
    return MultiPoly._raw(table, unpack(_core.decode_poly(rem, enc)))


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder = LEX) -> MultiPoly:
    lf, cf = f.leading_term(order)
    lg, cg = g.leading_term(order)
    m = monomial_lcm(lf, lg)
    return (f.mul_term(monomial_quotient(m, lf), 1 / cf)
            - g.mul_term(monomial_quotient(m, lg), 1 / cg))


def _projection(polys: Sequence[MultiPoly]):
    """Drop variables absent from ``polys``; restricting the ring this way
    leaves every order among the remaining variables unchanged."""
    used = set()
    for f in polys:
        for e in f.terms:
            used.update(i for i, x in enumerate(e) if x)
    keep = sorted(used)
    n = len(polys[0].table.names) if polys else 0

    def pack(terms):
        return {tuple(e[i] for i in keep): c for e, c in terms.items()}

    def unpack(terms):
        out = {}
        for e, c in terms.items():
            full = [0] * n
            for i, x in zip(keep, e):
                full[i] = x
            out[tuple(full)] = c
        return out

    return pack, unpack


def _kernel_order(order: MonomialOrder) -> Encoding:
    try:
        return Encoding(order.name)
    except ValueError:
        raise ValueError(f"no Groebner kernel for order {order.name!r}") from None


def buchberger(gens: Sequence[MultiPoly], order: MonomialOrder = LEX) -> List[MultiPoly]:
    """A Groebner basis of the ideal generated by ``gens``.

    The basis returned is in fact the reduced one (monic, sorted by
    decreasing leading monomial).  The zero ideal gives ``[]``.
    """
    table = _check_ring(list(gens))
    if table is None:
        return []
    gens = [g for g in gens if g]
    if not gens:
        return []
    key = (table.names, order.name, frozenset(g.monic(order) for g in gens))
    hit = _GB_CACHE.get(key)
    if hit is None:
        enc = _kernel_order(order)
        pack, unpack = _projection(gens)
        gb = _core.groebner([_core.encode_poly(pack(g.terms), enc) for g in gens], enc)
        hit = tuple(MultiPoly._raw(table, unpack(_core.decode_poly(f, enc))) for f in gb)
        if len(_GB_CACHE) >= 64:
            _GB_CACHE.clear()
        _GB_CACHE[key] = hit
    return list(hit)


# reduced bases are unique, so repeated requests can be served from memory
_GB_CACHE: Dict[tuple, Tuple[MultiPoly, ...]] = {}


reduced_groebner = buchberger


def interreduce(basis: Sequence[MultiPoly], order: MonomialOrder = LEX) -> List[MultiPoly]:
    """Mutually reduce a generating set until no element changes.

    Each element is replaced by its normal form modulo all the others;
    zeros are dropped and the survivors made monic.  The result spans the
    same ideal, has pairwise distinct leading monomials, and no term of any
    element is divisible by another element's leading monomial.  Applied
    to a Groebner basis this is the reduced Groebner basis; on an
    arbitrary generating set it is a (usually much shorter) autoreduced
    set which need not be a Groebner basis.
    """
    table = _check_ring(list(basis))
    if table is None:
        return []
    enc = _kernel_order(order)
    work = [_core.monic(_core.encode_poly(f.terms, enc)) for f in basis if f]
    changed = True
    while changed:
        changed = False
        idx = 0
        while idx < len(work):
            f = work[idx]
            others = [(max(g), g) for k, g in enumerate(work) if k != idx]
            r = _core.monic(_core.reduce(f, others, enc))
            if r != f:
                changed = True
                if r:
                    work[idx] = r
                else:
                    del work[idx]
                    continue
            idx += 1
    work.sort(key=max, reverse=True)
    return [MultiPoly._raw(table, _core.decode_poly(f, enc)) for f in work]


def is_groebner(basis: Sequence[MultiPoly], order: MonomialOrder = LEX) -> bool:
    """Every S-polynomial reduces to zero."""
    basis = [b for b in basis if b]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if poly_reduce(s_polynomial(basis[i], basis[j], order), basis, order):
                return False
    return True


def in_ideal(p: MultiPoly, gb: Sequence[MultiPoly], order: MonomialOrder = LEX) -> bool:
    """Membership test; ``gb`` must be a Groebner basis under ``order``."""
    return not poly_reduce(p, gb, order)


def same_ideal(g1: Sequence[MultiPoly], g2: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> bool:
    """Mutual reduction test: each generating set lies in the other's ideal.

    Ideal equality does not depend on the order, so the cheap graded
    reverse lexicographic one is the default.
    """
    b1 = buchberger(g1, order)
    b2 = buchberger(g2, order)
    return (all(in_ideal(p, b2, order) for p in g1)
            and all(in_ideal(p, b1, order) for p in g2))
