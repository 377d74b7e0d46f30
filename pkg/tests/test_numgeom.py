from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from legweb.numgeom import (
    NotLagrangian, RankConfig, SampleRejected, concurrency_point, contact_pair, control_cubic,
    first_integral_check, leaf_data, plucker, projective_distance, quadric_residual, rank_estimate,
    web_roots,
)
from legweb.numgeom.checks import BASE_POINT, rank_checks, web_checks
from legweb.numgeom.curves import ParamCurve
from legweb.numgeom.rank import constant_forms, forms_from_kernel, monomials, sample_points, trace_test

floats = st.floats(min_value=-10, max_value=10, allow_nan=False)
vec = st.lists(floats, min_size=4, max_size=4).map(np.array)
rats = st.fractions(min_value=-10, max_value=10, max_denominator=9)
rvec = st.lists(rats, min_size=4, max_size=4).map(tuple)


@given(vec, vec, vec, floats)
def test_pairing_antisymmetric_bilinear(u, v, w, a):
    assert contact_pair(u, v) == -contact_pair(v, u)
    lhs = contact_pair(a * u + w, v)
    rhs = a * contact_pair(u, v) + contact_pair(w, v)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(a)) * 100 * (1 + np.linalg.norm(u) + np.linalg.norm(w)) ** 2


@given(rvec, rvec, rvec, rats)
def test_pairing_exact_in_rational_mode(u, v, w, a):
    lin = tuple(a * x + y for x, y in zip(u, w))
    assert contact_pair(lin, v) == a * contact_pair(u, v) + contact_pair(w, v)
    assert contact_pair(u, u) == 0


@given(rvec, rvec)
def test_plucker_exact_points_lie_on_quadric(x, r):
    assume(any(x))
    # project r into the contact plane of x: y = r - (w(x, r) / w(x, e)) e with w(x, e) != 0
    e = next((ei for ei in np.eye(4, dtype=int).tolist() if contact_pair(x, ei) != 0), None)
    assume(e is not None)
    e = tuple(Fraction(c) for c in e)
    k = contact_pair(x, r) / contact_pair(x, e)
    y = tuple(ri - k * ei for ri, ei in zip(r, e))
    assert contact_pair(x, y) == 0
    try:
        q = plucker(x, y)
    except ValueError:
        assume(False)
    assert quadric_residual(q) == 0


@given(vec, vec)
def test_plucker_float_on_quadric(x, r):
    assume(np.linalg.norm(x) > 1e-3)
    jx = np.array([x[2], x[3], -x[0], -x[1]])  # w(x, y) = jx . y
    y = r - (jx @ r) / (jx @ jx) * jx
    assume(np.linalg.norm(np.cross(x[:3], y[:3])) + abs(x[3] * y[0] - x[0] * y[3]) > 1e-3)
    try:
        q = plucker(x, y, tol=1e-9)
    except ValueError:
        assume(False)
    assert quadric_residual(q) < 1e-12


def test_plucker_rejects_non_lagrangian():
    with pytest.raises(NotLagrangian):
        plucker((1, 0, 0, 0), (0, 0, 1, 0))


def test_reference_incidence_polynomial(reference):
    x = (Fraction(3), Fraction(-1), Fraction(5), Fraction(7))
    # x0 t^3 - 3 x1 t^2 - x3 t - x2
    assert reference.exact_incidence(x) == [-5, -7, 3, 3]


def test_control_curve_is_not_legendrian():
    c = control_cubic()
    assert not c.legendrian
    assert c.legendrian_residual() == [0, 2, 0, 2]


triples = st.lists(st.integers(-6, 6), min_size=3, max_size=3, unique=True).map(sorted)


@given(triples)
def test_rational_round_trip(reference, ts):
    pts = [reference.exact(Fraction(t)) for t in ts]
    c = concurrency_point(pts)
    assert c.kernel_dim == 1
    assert web_roots(reference, c.point) == ts


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_float_round_trip(reference, ts):
    ts = sorted(ts)
    assume(min(np.diff(ts)) > 0.05)
    c = concurrency_point([reference(t) for t in ts])
    assume(c.kernel_dim == 1)
    try:
        roots = web_roots(reference, c.point)
    except SampleRejected:
        assume(False)
    assert np.allclose(roots, ts, atol=1e-7)
    back = concurrency_point([reference(t) for t in roots])
    assert projective_distance(back.point, c.point) < 1e-8


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3), st.floats(0.05, 0.95), st.integers(0, 2))
def test_leaves_are_level_sets(reference, ts, s, i):
    ts = sorted(ts)
    assume(min(np.diff(ts)) > 0.3)
    x = concurrency_point([reference(t) for t in ts]).point
    try:
        dev = first_integral_check(reference, x, i, s)
    except SampleRejected:
        assume(False)
    assert dev < 1e-8


def test_zero_step_is_exact(reference):
    assert first_integral_check(reference, np.array(BASE_POINT, float), 1, 0.0) == 0.0


def test_curve_point_is_its_own_root(reference):
    assert reference.exact_incidence((1, 0, 0, 0))[0] == 0


@pytest.mark.parametrize("curve_name", ["reference", "control"])
def test_leaf_jacobians_match_finite_differences(curve_name, reference):
    curve = reference if curve_name == "reference" else control_cubic()
    x = np.asarray(concurrency_point([curve(t) for t in (1.0, 2.0, 3.0)]).point, dtype=float)
    k = int(np.argmax(np.abs(x)))
    x = x / x[k]
    L = leaf_data(curve, x, k)
    free = [j for j in range(4) if j != k]
    h = 1e-6
    for col, j in enumerate(free):
        e = np.zeros(4)
        e[j] = h
        Lp, Lm = leaf_data(curve, x + e, k), leaf_data(curve, x - e, k)
        assert np.allclose((Lp.t - Lm.t) / (2 * h), L.dt[:, col], atol=1e-6, rtol=1e-6)
        assert np.allclose((Lp.s - Lm.s) / (2 * h), L.ds[:, col], atol=1e-5, rtol=1e-6)


def test_reference_relations_hold_exactly(reference):
    # sum s_i = 0, sum t_i s_i = -6 and sum (t_i^2 s_i + 4 t_i) = 0 near the base point
    k, pts = sample_points(reference, BASE_POINT, RankConfig(samples=20, seed=3))
    for x in pts:
        L = leaf_data(reference, x, k)
        t, s = L.t, L.s
        assert abs(s.sum()) < 1e-9 * (1 + np.abs(s).max())
        assert abs((t * s).sum() + 6) < 1e-8 * (1 + np.abs(t * s).max())
        assert abs((t * t * s + 4 * t).sum()) < 1e-8 * (1 + np.abs(t * t * s).max())


def _ref():
    from legweb.numgeom import reference_cubic
    return reference_cubic()


def test_rank_ladder_small():
    dims = [rank_estimate(_ref(), BASE_POINT, RankConfig(samples=120, degree=n)).kernel_dim for n in range(4)]
    assert dims == [0, 1, 2, 3]


def test_degree_zero_has_empty_basis():
    r = rank_estimate(_ref(), BASE_POINT, RankConfig(samples=20, degree=0))
    assert r.kernel_dim == 0 and r.columns == []


def test_literal_t_only_basis_has_no_relations():
    r = rank_estimate(_ref(), BASE_POINT, RankConfig(samples=200, degree=4, basis="t"))
    assert r.kernel_dim == 0


def test_rank_is_seed_deterministic():
    a = rank_estimate(_ref(), BASE_POINT, RankConfig(samples=60, degree=3, seed=5))
    b = rank_estimate(_ref(), BASE_POINT, RankConfig(samples=60, degree=3, seed=5))
    assert a.singular_values == b.singular_values


def test_trace_of_zero_and_constant_forms(reference):
    k, pts = sample_points(reference, BASE_POINT, RankConfig(samples=30))
    assert trace_test(reference, constant_forms(0.0), pts, k).residual == 0.0
    one = trace_test(reference, constant_forms(1.0), pts, k)
    assert one.residual > 1e-3 * one.scale


def test_kernel_relations_have_small_trace(reference):
    cfg = RankConfig(samples=200, degree=3)
    r = rank_estimate(reference, BASE_POINT, cfg)
    k, pts = sample_points(reference, BASE_POINT, RankConfig(samples=40, seed=11))
    for v in r.kernel:
        t = trace_test(reference, forms_from_kernel(v, monomials(3), r.base_roots, r.base_s), pts, k)
        assert t.residual < 1e-11 * t.scale


def test_bad_config_rejected():
    with pytest.raises(ValueError):
        RankConfig(basis="chebyshev")
    with pytest.raises(ValueError):
        ParamCurve.parse("bad", ["1", "t"], frame="nope")


def test_web_and_rank_suites_pass():
    assert all(c.ok for c in web_checks(0))
    assert all(c.ok for c in rank_checks(RankConfig(samples=200)))
