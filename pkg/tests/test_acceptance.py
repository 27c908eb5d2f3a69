"""End-to-end acceptance checks, one group per criterion.

Each test carries ``@pytest.mark.criterion(n)``; the conftest hook prints a
``criterion n: PASS/FAIL`` line per group at the end of the run.
"""

import random
from fractions import Fraction as Fr

import pytest

from rkderive.algebra import GREVLEX, LEX, RationalFunction, buchberger, interreduce, poly_reduce, same_ideal
from rkderive.conditions import canonical, generate_conditions, tree_conditions
from rkderive.harness import PROBLEMS, estimate_order
from rkderive.series import total_derivatives
from rkderive.solver import (
    ExcludedLocusError,
    equal_node_system,
    order4_basis,
    solve_order3_family,
    solve_order4_autonomous,
    solve_order4_equal_c,
    solve_order4_family,
)
from rkderive.tableau import ButcherTableau, catalogue, embed_lower_order, verify_order

from reference import (
    AUTONOMOUS_ORDER4,
    EMBEDDED_FAMILY,
    EMBEDDED_POINTS,
    EQUAL_NODE_BASIS,
    EQUAL_NODE_FAMILY,
    F_AUTONOMOUS,
    ORDER3_EQUATIONS,
    ORDER3_FAMILY,
    ORDER3_POINTS,
    ORDER4_A,
    ORDER4_B,
    ORDER4_BASIS,
    polys,
    rf,
)
from test_series import dp

CAT = catalogue()
crit = pytest.mark.criterion


@pytest.fixture(scope="module")
def order4():
    return solve_order4_family()


# 1 -------------------------------------------------------------------------------

@crit(1)
def test_order3_condition_set():
    cs = generate_conditions(3, 3)
    assert len(cs) == 8
    assert set(cs.equations) == {canonical(p) for p in polys(ORDER3_EQUATIONS, cs.table)}


# 2 -------------------------------------------------------------------------------

@crit(2)
def test_order3_family():
    fam = solve_order3_family()
    for k, pair in ORDER3_FAMILY.items():
        assert fam[k] == rf(pair, fam.table), k
    g = fam.table.gen
    assert fam["a21"] == RationalFunction(g("c2"))
    assert fam["a31"] + fam["a32"] == RationalFunction(g("c3"))
    for (c2, c3), want in ORDER3_POINTS.items():
        vals = fam.specialize({"c2": c2, "c3": c3}).values()
        assert tuple(vals[k] for k in ("a21", "a31", "a32", "b1", "b2", "b3")) == want


# 3 -------------------------------------------------------------------------------

@crit(3)
def test_order4_groebner_pipeline():
    raw = generate_conditions(4, 4)
    assert len(raw) == 19
    cs = generate_conditions(4, 4, row_sum=True, table=raw.table)
    ib, c4_is_one = order4_basis(cs)
    assert same_ideal(ib, polys(ORDER4_BASIS, cs.table))
    assert c4_is_one
    gb = buchberger(ib, GREVLEX)
    assert poly_reduce(cs.table.gen("c4") - 1, gb, GREVLEX).is_zero()


# 4 -------------------------------------------------------------------------------

@crit(4)
def test_order4_family(order4):
    for k, pair in {**ORDER4_B, **ORDER4_A}.items():
        assert order4[k] == rf(pair, order4.table), k
    ident = order4["a32"] * order4["a43"] * order4["b4"] * RationalFunction(order4.table.gen("c2"))
    assert ident == RationalFunction(order4.table.const(Fr(1, 24)))


@crit(4)
def test_order4_random_samples(order4):
    raw = generate_conditions(4, 4, table=order4.table)
    rng = random.Random(2024)
    done = 0
    while done < 5:
        pt = {"c2": Fr(rng.randint(-20, 20), rng.randint(1, 9)), "c3": Fr(rng.randint(-20, 20), rng.randint(1, 9))}
        try:
            vals = dict(order4.specialize(pt).values(), **pt)
        except ExcludedLocusError:
            continue
        assert all(e.evaluate(vals) == 0 for e in raw.equations), pt
        done += 1


# 5 -------------------------------------------------------------------------------

@crit(5)
def test_equal_node_case():
    cs = equal_node_system()
    ib = interreduce(list(cs.equations), LEX)
    assert len(ib) == 7
    assert set(ib) == {p.monic(LEX) for p in polys(EQUAL_NODE_BASIS, cs.table)}
    fam = solve_order4_equal_c(cs)
    for k, pair in EQUAL_NODE_FAMILY.items():
        assert fam[k] == rf(pair, fam.table), k
    vals = fam.specialize({"r1": Fr(1, 3)}).values()
    rk4 = CAT["rk4"]
    assert vals["u"] == rk4.c[1] == rk4.c[2]
    assert all(vals[k] == v for k, v in rk4.values().items() if not k.startswith("c"))


# 6 -------------------------------------------------------------------------------

@crit(6)
def test_autonomous_displays():
    assert total_derivatives(4, autonomous=True) == [dp(t) for t in F_AUTONOMOUS]
    cs = generate_conditions(4, 4, autonomous=True, row_sum=True)
    assert len(cs) == 7
    assert set(cs.equations) == {canonical(p) for p in polys(AUTONOMOUS_ORDER4, cs.table)}


@crit(6)
def test_autonomous_solve_matches_general_family(order4):
    branches = solve_order4_autonomous()
    same = [b for b in branches if all(b[k] == order4[k] for k in order4.solution)]
    assert len(same) == 1


# 7 -------------------------------------------------------------------------------

@crit(7)
def test_embedded_pair():
    fam = embed_lower_order(CAT["kutta38"])
    assert fam.free == ("r1",)
    for k, pair in EMBEDDED_FAMILY.items():
        assert fam.family[k] == rf((pair, "1"), fam.family.table), k
    for r1, want in EMBEDDED_POINTS.items():
        pair = fam.pair(r1=r1)
        assert pair.shat == want
        assert verify_order(pair.hat_method, 3).satisfied


# 8 -------------------------------------------------------------------------------

@crit(8)
@pytest.mark.parametrize("s,auto", [(2, False), (2, True), (3, False), (3, True), (4, False)])
def test_oracle_ideals(s, auto):
    direct = generate_conditions(s, s, autonomous=auto, row_sum=True)
    trees = tree_conditions(s, s, table=direct.table)
    assert same_ideal(list(direct.equations), list(trees.equations))


@crit(8)
def test_autonomous_order4_ideal_is_contained_in_tree_ideal():
    direct = generate_conditions(4, 4, autonomous=True, row_sum=True)
    trees = tree_conditions(4, 4, table=direct.table)
    gb = buchberger(list(trees.equations), GREVLEX)
    assert all(poly_reduce(e, gb, GREVLEX).is_zero() for e in direct.equations)


@crit(8)
@pytest.mark.xfail(strict=True, reason=(
    "for a scalar autonomous ODE the elementary differentials of the trees [[t],t] and [[t,t]]"
    " coincide, so the 7 direct conditions only constrain the sum of two tree conditions and"
    " the direct ideal is strictly smaller than the tree ideal"))
def test_autonomous_order4_ideal_equals_tree_ideal(order4):
    direct = generate_conditions(4, 4, autonomous=True, row_sum=True)
    trees = tree_conditions(4, 4, table=direct.table)
    # A point of V(direct) is a certificate: every tree condition must vanish there
    # if the tree ideal is contained in the direct one.
    other = [b for b in solve_order4_autonomous() if b["a32"] != order4["a32"]]
    pt = {"c2": Fr(1, 3), "c3": Fr(3, 4)}
    vals = dict(other[0].specialize(pt).values(), **pt)
    assert all(e.evaluate(vals) == 0 for e in direct.equations)
    residuals = [e.evaluate(vals) for e in trees.equations]
    assert residuals == [0] * len(residuals)


# 9 -------------------------------------------------------------------------------

CONVERGENCE = [("rk4", 4), ("kutta3", 3), ("heun3", 3), ("improved-euler", 2)]


@crit(9)
@pytest.mark.parametrize("problem", ["exp", "linear"])
@pytest.mark.parametrize("name,p", CONVERGENCE)
def test_convergence(name, p, problem):
    rep = estimate_order(CAT[name], PROBLEMS[problem], Fr(1, 10), 5)
    assert abs(rep.observed - p) <= 0.3, str(rep)


@crit(9)
@pytest.mark.parametrize("problem", ["exp", "linear"])
def test_convergence_embedded_weights(problem):
    hat = embed_lower_order(CAT["kutta38"]).pair(r1=Fr(1, 6)).hat_method
    rep = estimate_order(hat, PROBLEMS[problem], Fr(1, 10), 5)
    assert abs(rep.observed - 3) <= 0.3, str(rep)


# 10 ------------------------------------------------------------------------------

@crit(10)
def test_negative_controls():
    rk4 = CAT["rk4"]
    assert not verify_order(rk4.perturbed(2, Fr(1, 100)), 2).satisfied
    # shifting the same mass out of b1 keeps consistency, so only order 2 breaks
    bad = rk4.perturbed(2, Fr(1, 100)).perturbed(1, Fr(-1, 100))
    assert verify_order(bad, 1).satisfied and not verify_order(bad, 2).satisfied
    rep = estimate_order(bad, PROBLEMS["exp"], Fr(1, 10), 5)
    assert abs(rep.observed - 1) <= 0.3, str(rep)
    broken = ButcherTableau([0, Fr(1, 2)], [[], [Fr(1, 3)]], [0, 1])
    assert broken.validate()
