from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from legweb.symkernel import (
    CyclicBindings, P, Poly, check_acyclic, collect, homogeneous_parts, substitute, weight_of,
)
from legweb.symkernel.bridge import factor, from_sympy, to_sympy
from legweb.symkernel.eliminate import eliminate
from legweb.symkernel.linear import solve_linear

NAMES = ("x", "y", "z")

coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=7)
monos = st.fixed_dictionaries({n: st.integers(0, 3) for n in NAMES})
polys = st.lists(st.tuples(monos, coeffs), max_size=5).map(
    lambda ts: sum((Poly.monomial(m, c) for m, c in ts), Poly()))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly()


@given(polys, polys)
def test_product_agrees_with_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0
    assert from_sympy(to_sympy(a)) == a


@given(polys)
def test_text_round_trip(a):
    assert P(a.to_text()) == a


@given(polys, polys)
def test_substitution_is_a_homomorphism(a, b):
    bind = {"x": P("y + 2*z"), "y": P("1/3*z")}
    assert substitute(a * b, bind) == substitute(a, bind) * substitute(b, bind)


@given(polys, st.sampled_from(NAMES))
def test_diff_matches_sympy(a, n):
    assert to_sympy(a.diff(n)) - sympy.diff(to_sympy(a), sympy.Symbol(n)) == 0


def test_exact_coefficients():
    p = P("3/4*x**2*y - 1/3")
    assert p.coefficient({"x": 2, "y": 1}) == Fraction(3, 4)
    assert p.coefficient({}) == Fraction(-1, 3)
    assert set(collect(p, ["x"])) == {(2,), (0,)}


def test_cyclic_bindings_rejected():
    with pytest.raises(CyclicBindings):
        check_acyclic({"x": P("y"), "y": P("x + 1")})


def test_weights_and_homogeneous_parts():
    from legweb.symkernel import symbol
    symbol("wa", 1)
    symbol("wb", 2)
    assert weight_of(P("wa**2 + 3*wb")) == 2
    assert str(weight_of(P("wa + wb"))).startswith("inhomogeneous")
    # grouping is by total degree, not weight
    parts = homogeneous_parts(P("wa + wb + wa*wb"), ["wa", "wb"])
    assert parts == {1: P("wa + wb"), 2: P("wa*wb")}


def test_linear_solve():
    sol, left = solve_linear([P("u + v - 1"), P("u - v")], ["u", "v"], {})
    assert sol == {"u": P("1/2"), "v": P("1/2")} and not left


def test_eliminate_point_and_curve():
    assert eliminate([P("u*v"), P("u + v")], ["u", "v"]).points() == [(0, 0)]
    s = eliminate([P("u**2 - v**2")], ["u", "v"])
    assert not s.points() and len(s.positive_dimensional) == 2


def test_factor():
    c, fs = factor(P("2*x**2 - 2*y**2"))
    assert c == 2 and sorted(str(f) for f, _ in fs) == ["x + y", "x - y"]
