from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rkderive.algebra import ParseError, RationalFunction, parse_poly
from rkderive.tableau import (
    ButcherTableau,
    TableauError,
    catalogue,
    embed_lower_order,
    from_text_form,
    parse_rational,
    to_latex,
    to_text_form,
    verify_order,
)

from reference import EMBEDDED_FAMILY, EMBEDDED_POINTS

CAT = catalogue()


def test_catalogue_contents():
    assert {"improved-euler", "kutta3", "heun3", "rk4", "kutta38", "order3-c2=-1-c3=1"} <= set(CAT)
    assert CAT["kutta38"].b == (Fr(1, 8), Fr(3, 8), Fr(3, 8), Fr(1, 8))
    assert CAT["heun3"].b == (Fr(1, 4), Fr(0), Fr(3, 4))


@pytest.mark.parametrize("name", sorted(CAT))
def test_catalogue_entries_verify_at_nominal_order(name):
    t = CAT[name]
    assert t.validate() == []
    for q in range(1, t.order + 1):
        assert verify_order(t, q).satisfied
    assert not verify_order(t, t.order + 1).satisfied


def test_rk4_is_not_order5():
    rep = verify_order(CAT["rk4"], 5)
    assert not rep.satisfied and rep.failures()


def test_euler_residual():
    rep = verify_order(CAT["euler"], 2)
    assert [r for _, r in rep.failures()] == [Fr(-1, 2)]


def test_row_sum_violation_flagged():
    t = ButcherTableau([0, Fr(1, 2)], [[], [Fr(1, 3)]], [0, 1])
    assert t.validate() and "row-sum" in t.validate()[0]
    assert not verify_order(t, 1).satisfied


def test_malformed_tableaux():
    with pytest.raises(TableauError):
        ButcherTableau([0, 1], [[], [1]], [1])
    with pytest.raises(TableauError):
        ButcherTableau([0, 1], [[0, 1], [1, 0]], [Fr(1, 2), Fr(1, 2)])
    with pytest.raises(TableauError):
        ButcherTableau([1], [[]], [1])
    square = ButcherTableau([0, 1], [[0, 0], [1, 0]], [Fr(1, 2), Fr(1, 2)])
    ref = CAT["improved-euler"]
    assert (square.c, square.a, square.b) == (ref.c, ref.a, ref.b)


def test_rationals_parse_exactly():
    assert parse_rational("1/3") == Fr(1, 3)
    for bad in ("0.5", 0.5, "1e-3", True):
        with pytest.raises(TableauError):
            parse_rational(bad)


# -- embedding ---------------------------------------------------------------------

@pytest.fixture(scope="module")
def family():
    return embed_lower_order(CAT["kutta38"])


def test_embedded_family(family):
    assert family.free == ("r1",)
    for k, text in EMBEDDED_FAMILY.items():
        assert family.family[k] == RationalFunction(parse_poly(text, family.family.table))


@pytest.mark.parametrize("r1", sorted(EMBEDDED_POINTS))
def test_embedded_points(family, r1):
    pair = family.pair(r1=r1)
    assert pair.shat == EMBEDDED_POINTS[r1]
    assert pair.c_extra == 1
    full, hat = pair.verify()
    assert full.satisfied and hat.satisfied


@given(st.fractions(min_value=-3, max_value=3, max_denominator=12))
def test_every_member_is_order3(r1):
    pair = embed_lower_order(CAT["kutta38"]).pair(r1=r1)
    assert verify_order(pair.hat_method, 3).satisfied


def test_embed_requires_verified_base():
    with pytest.raises(ValueError):
        embed_lower_order(CAT["rk4"].perturbed(2, Fr(1, 100)), 4)


# -- text and LaTeX -------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(CAT))
def test_catalogue_round_trips(name):
    assert from_text_form(to_text_form(CAT[name])) == CAT[name]


@st.composite
def tableaux(draw):
    s = draw(st.integers(1, 5))
    q = st.fractions(min_value=-4, max_value=4, max_denominator=9)
    a = [[draw(q) for _ in range(i)] for i in range(s)]
    c = [sum(row, Fr(0)) for row in a]
    b = [draw(q) for _ in range(s)]
    bhat = draw(st.one_of(st.none(), st.lists(q, min_size=s, max_size=s)))
    return ButcherTableau(c, a, b, label=draw(st.text(max_size=8)), bhat=bhat)


@given(tableaux())
def test_random_round_trip(t):
    assert from_text_form(to_text_form(t)) == t


def test_float_rejected_with_position():
    doc = '{\n  "c": ["0"],\n  "a": [[]],\n  "b": [1.0]\n}\n'
    with pytest.raises(ParseError) as exc:
        from_text_form(doc)
    assert (exc.value.line, exc.value.column) == (4, 9)


def test_json_syntax_error_position():
    with pytest.raises(ParseError) as exc:
        from_text_form('{\n  "c": ["0"],\n  "a": [[]]\n  "b": ["1"]\n}')
    assert exc.value.line == 4


def test_decimal_string_rejected():
    with pytest.raises(ParseError):
        from_text_form('{"c": ["0"], "a": [[]], "b": ["0.5"]}')


def test_latex_two_weight_rows(family):
    ext = family.pair(r1=Fr(1)).extended
    tex = to_latex(ext)
    lines = tex.strip().splitlines()
    assert lines[0] == r"\begin{array}{c|ccccc}"
    hline = lines.index(r"\hline")
    weights = lines[hline + 1:-1]
    assert len(weights) == 2
    assert weights[0] == r" & \frac{1}{8} & \frac{3}{8} & \frac{3}{8} & \frac{1}{8} & 0 \\"
    assert weights[1] == r" & -\frac{1}{8} & \frac{9}{8} & -\frac{3}{8} & -\frac{5}{8} & 1 \\"
