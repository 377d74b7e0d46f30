import pytest
from hypothesis import given
from hypothesis import strategies as st

from legweb.exterior import (
    DerivationTable, Form, MatrixForm, extract, matrix_wedge, monomial_text, parse_monomial, rho0, th,
    w1, w2, wedge,
)
from legweb.symkernel import P, Poly

BASIS = (w1, w2, th, rho0)
small = st.sampled_from([P("x"), P("y"), P("1/2"), P("x*y - 3"), P("-2*z")])
one_forms = st.lists(st.tuples(st.integers(0, 3), small), min_size=1, max_size=4).map(
    lambda ts: sum((BASIS[i] * c for i, c in ts), Form()))


def forms_of_grade(k):
    return st.lists(one_forms, min_size=k, max_size=k).map(
        lambda fs: fs[0] if len(fs) == 1 else wedge(fs[0], wedge(fs[1], fs[2]) if len(fs) == 3 else fs[1]))


@given(one_forms, one_forms)
def test_one_forms_anticommute(a, b):
    assert wedge(a, b) == -wedge(b, a)
    assert wedge(a, a).is_zero()


@given(one_forms, forms_of_grade(2))
def test_graded_commutativity(a, b):
    assert wedge(a, b) == wedge(b, a)


@given(one_forms, one_forms, one_forms)
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_monomial_names_round_trip():
    for text in ("w1", "w1^w2", "w2^th^rho0"):
        assert monomial_text(parse_monomial(text)) == text
    assert extract(wedge(w2, w1) * P("x"), "w1^w2") == P("-x")


def test_top_degree():
    top = wedge(wedge(w1, w2), wedge(th, rho0))
    assert top.grade() == 4
    assert wedge(top, w1).is_zero()


@pytest.fixture
def table():
    from legweb.sp2model import structure_table
    return structure_table()


invariants = st.sampled_from([P("A0"), P("B1"), P("A1*A2 - 1/3"), P("C9"), P("2*B0**2")])


@given(invariants, invariants)
def test_leibniz(f, g):
    from legweb.sp2model import structure_table
    t = structure_table()
    assert t.d_poly(f * g) == t.d_poly(f) * g + t.d_poly(g) * f


def test_leibniz_on_forms(table):
    f = P("A0")
    a = w1 * P("B1") + th * P("A2")
    lhs = table.d(a * f)
    rhs = wedge(table.d_poly(f), a) + table.d(a) * f
    assert lhs == rhs


def test_strict_policy_refuses_unknown_symbols():
    t = DerivationTable(policy="strict")
    with pytest.raises(Exception):
        t.d_poly(P("x"))


def test_matrix_wedge_shape():
    m = MatrixForm([[w1, w2, Form(), Form()], [Form()] * 4, [Form()] * 4, [th, Form(), Form(), Form()]])
    sq = matrix_wedge(m, m)
    assert sq[0, 0] == wedge(w2, Form()) + wedge(w1, w1)
    assert sq[3, 1] == wedge(th, w2)
