import json
import random
from fractions import Fraction as Fr

import pytest

from rkderive.algebra import RationalFunction, VarTable, parse_poly
from rkderive.conditions import generate_conditions
from rkderive.solver import (
    ExcludedLocusError,
    parametrize,
    quadratic_branches,
    solve_order3_family,
    solve_order4_autonomous,
    solve_order4_equal_c,
    solve_order4_family,
    tidy,
)
from rkderive.tableau import catalogue

from reference import (
    EMBEDDED_FAMILY,
    EMBEDDED_POINTS,
    EQUAL_NODE_FAMILY,
    ORDER3_FAMILY,
    ORDER3_POINTS,
    ORDER4_A,
    ORDER4_B,
    rf,
)


@pytest.fixture(scope="module")
def order4():
    return solve_order4_family()


@pytest.fixture(scope="module")
def order3():
    return solve_order3_family()


# -- order 3 ---------------------------------------------------------------------

def test_order3_closed_forms(order3):
    for k, pair in ORDER3_FAMILY.items():
        assert order3[k] == rf(pair, order3.table), k


def test_order3_row_sums(order3):
    g = order3.table.gen
    assert order3["a21"] == RationalFunction(g("c2"))
    assert order3["a31"] + order3["a32"] == RationalFunction(g("c3"))


@pytest.mark.parametrize("point", sorted(ORDER3_POINTS))
def test_order3_points(order3, point):
    c2, c3 = point
    vals = order3.specialize({"c2": c2, "c3": c3}).values()
    got = tuple(vals[k] for k in ("a21", "a31", "a32", "b1", "b2", "b3"))
    assert got == ORDER3_POINTS[point]


def test_order3_excluded_locus(order3):
    with pytest.raises(ExcludedLocusError):
        order3.specialize({"c2": Fr(1, 2), "c3": Fr(1, 2)})
    with pytest.raises(ExcludedLocusError):
        order3.specialize({"c2": Fr(2, 3), "c3": Fr(1)})


def test_order3_against_all_equations(order3):
    assert order3.check(generate_conditions(3, 3).equations) == []


# -- order 4 ---------------------------------------------------------------------

def test_order4_weights(order4):
    for k, pair in ORDER4_B.items():
        assert order4[k] == rf(pair, order4.table), k


def test_order4_couplings(order4):
    for k, pair in ORDER4_A.items():
        assert order4[k] == rf(pair, order4.table), k


def test_order4_residual_identity(order4):
    ident = order4["a32"] * order4["a43"] * order4["b4"] * RationalFunction(order4.table.gen("c2"))
    assert ident == RationalFunction(order4.table.const(Fr(1, 24)))


def test_order4_excluded_loci(order4):
    g = order4.table.gen
    factors = order4.excluded_factors()
    assert g("c2") - g("c3") in factors
    with pytest.raises(ExcludedLocusError):
        order4.specialize({"c2": Fr(1, 3), "c3": Fr(1, 3)})


def _sample_points(fam, n, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        pt = {"c2": Fr(rng.randint(-9, 9), rng.randint(1, 7)), "c3": Fr(rng.randint(-9, 9), rng.randint(1, 7))}
        try:
            out.append((pt, fam.specialize(pt)))
        except ExcludedLocusError:
            continue
    return out


def test_order4_random_samples_zero_raw_equations(order4):
    raw = generate_conditions(4, 4, table=order4.table)
    assert len(raw) == 19
    for pt, fixed in _sample_points(order4, 5):
        vals = dict(fixed.values(), **pt)
        assert all(e.evaluate(vals) == 0 for e in raw.equations)


def test_order4_reproduces_kutta38(order4):
    t = catalogue()["kutta38"]
    vals = order4.specialize({"c2": Fr(1, 3), "c3": Fr(2, 3)}).values()
    assert all(vals[k] == v for k, v in t.values().items() if k in vals)


def test_family_serialization(order4):
    doc = json.loads(order4.to_json())
    assert doc["free"] == ["c2", "c3"]
    assert set(doc["solution"]) >= {"a32", "b4"}
    assert len(doc["excluded"]) == len(order4.excluded)


def test_excluded_loci_are_the_denominators(order4):
    dens = {v.den.primitive() for v in order4.solution.values() if not v.den.is_constant()}
    assert set(order4.excluded) == dens


# -- equal nodes -------------------------------------------------------------------

def test_equal_node_family():
    fam = solve_order4_equal_c()
    for k, pair in EQUAL_NODE_FAMILY.items():
        assert fam[k] == rf(pair, fam.table), k
    assert fam.free == ("r1",)
    assert any("singular" in n for n in fam.notes)
    rk4 = fam.specialize({"r1": Fr(1, 3)}).values()
    ref = catalogue()["rk4"].values()
    assert all(rk4[k] == v for k, v in ref.items() if not k.startswith("c"))
    assert rk4["u"] == ref["c2"] == ref["c3"]
    half = fam.specialize({"r1": Fr(1, 2)}).values()
    assert [half[f"b{i}"] for i in range(1, 5)] == [Fr(1, 6), Fr(1, 2), Fr(1, 6), Fr(1, 6)]
    assert (half["a32"], half["a42"], half["a43"]) == (Fr(1), Fr(1, 2), Fr(1, 2))
    with pytest.raises(ExcludedLocusError):
        fam.specialize({"r1": Fr(2, 3)})


# -- autonomous --------------------------------------------------------------------------

def test_autonomous_branches(order4):
    branches = solve_order4_autonomous()
    assert len(branches) == 2
    same = [b for b in branches if all(b[k] == order4[k] for k in order4.solution)]
    assert len(same) == 1
    eqs = generate_conditions(4, 4, autonomous=True, row_sum=True, subs={"c4": 1})
    for b in branches:
        assert b.check(eqs.equations) == []


# -- parametrize and helpers ----------------------------------------------------------------

def test_parametrize_embedded_system():
    t = VarTable(["s1", "s2", "s3", "s4", "s5"])
    s = t.gens()
    c = [Fr(0), Fr(1, 3), Fr(2, 3), Fr(1), Fr(1)]
    # order-3 autonomous conditions for Kutta 3/8 plus a fifth stage with a-row = b
    a = [[], [Fr(1, 3)], [Fr(-1, 3), Fr(1)], [Fr(1), Fr(-1), Fr(1)], [Fr(1, 8), Fr(3, 8), Fr(3, 8), Fr(1, 8)]]
    eqs = [sum(s, t.zero) - 1,
           sum((si * ci for si, ci in zip(s, c)), t.zero) - Fr(1, 2),
           sum((si * ci * ci for si, ci in zip(s, c)), t.zero) - Fr(1, 3),
           sum((s[i] * a[i][j] * c[j] for i in range(5) for j in range(i)), t.zero) - Fr(1, 6)]
    fam = parametrize(eqs, ["s1", "s2", "s3", "s4", "s5"])
    assert fam.free == ("r1",)
    for k, text in EMBEDDED_FAMILY.items():
        assert fam[k] == RationalFunction(parse_poly(text, fam.table)), k
    for r1, want in EMBEDDED_POINTS.items():
        vals = fam.specialize({"r1": r1}).values()
        assert tuple(vals[f"s{i}"] for i in range(1, 6)) == want


def test_quadratic_branches():
    t = VarTable(["x", "c"])
    x, c = t.gens()
    roots = quadratic_branches((x - c) * (x + c * 2 - 1), "x")
    want = [RationalFunction(c), RationalFunction(-c * 2 + 1)]
    assert len(roots) == 2
    assert all(any(r == w for r in roots) for w in want)


def test_tidy_cancels_shared_factors():
    t = VarTable(["c2", "c3"])
    c2, c3 = t.gens()
    q = c2 * c3 * 6 - c2 * 4 - c3 * 4 + 3
    messy = RationalFunction((c2 - 1) * q ** 2, (c2 - c3) * q ** 3, _normalize=False)
    clean = tidy(messy, hints=[q])
    assert clean == messy
    assert clean.den.total_degree() == 3
