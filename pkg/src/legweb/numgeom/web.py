"""The dual 3-web of a curve: incidence roots, concurrency, leaf coordinates."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .contact import J, contact_pair, normalize
from .curves import ParamCurve

log = logging.getLogger(__name__)

DISCRIMINANT_TOL = 1e-8


class SampleRejected(ValueError):
    """The point lies on (or too near) the singular locus of the web."""


@dataclass
class RootReport:
    roots: np.ndarray
    discriminant: float
    newton_step: float
    residual: float


def _discriminant(coeffs_desc: np.ndarray, roots: np.ndarray) -> float:
    lead = coeffs_desc[0]
    n = len(roots)
    prod = 1.0 + 0j
    for i in range(n):
        for j in range(i + 1, n):
            prod *= (roots[i] - roots[j]) ** 2
    return float(abs(lead ** (2 * n - 2) * prod))


def _sort_roots(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r)
    if np.all(np.abs(r.imag) <= 1e-12 * np.maximum(1.0, np.abs(r))):
        return np.sort(r.real)
    return r[np.lexsort((r.imag, r.real))]


def root_report(curve: ParamCurve, x) -> RootReport:
    """Roots of t -> w(x, g(t)) by companion eigenvalues and one Newton step."""
    asc = curve.incidence(np.asarray(x))
    deg = curve.degree
    asc = np.concatenate([asc, np.zeros(max(0, deg + 1 - len(asc)))])
    desc = asc[::-1]
    scale = np.max(np.abs(desc))
    if scale == 0:
        raise SampleRejected("the whole curve lies in the contact plane")
    desc = desc / scale
    if abs(desc[0]) < DISCRIMINANT_TOL:
        raise SampleRejected(f"root at infinity (leading coefficient {abs(desc[0]):.3e})")
    roots = np.roots(desc).astype(complex)
    p = np.polynomial.Polynomial(desc[::-1])
    dp = p.deriv()
    step = p(roots) / dp(roots)
    roots = roots - step
    disc = _discriminant(desc, roots)
    if disc < DISCRIMINANT_TOL:
        raise SampleRejected(f"near-multiple roots (normalized discriminant {disc:.3e})")
    roots = _sort_roots(roots)
    return RootReport(roots, disc, float(np.max(np.abs(step))), float(np.max(np.abs(p(roots)))))


def web_roots(curve: ParamCurve, x):
    """Sorted parameters t_i with w(x, g(t_i)) = 0.

    Exact input (ints or Fractions) is solved exactly and must give rational roots.
    """
    if all(isinstance(c, (int, Fraction)) for c in x):
        return exact_roots(curve, x)
    return root_report(curve, x).roots


def exact_roots(curve: ParamCurve, x) -> list[Fraction]:
    t = sympy.Symbol("t")
    asc = curve.exact_incidence(x)
    poly = sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * t ** k
                          for k, c in enumerate(asc)), t)
    if poly.degree() < curve.degree:
        raise SampleRejected("root at infinity")
    if sympy.discriminant(poly) == 0:
        raise SampleRejected("multiple root")
    rts = sympy.roots(poly, filter="Q")
    if sum(rts.values()) != poly.degree():
        raise SampleRejected("roots are not all rational")
    return sorted(Fraction(int(r.p), int(r.q)) for r in rts)


@dataclass
class Concurrency:
    point: np.ndarray | tuple
    kernel_dim: int
    singular_values: list[float] = field(default_factory=list)


def concurrency_point(points, *, tol: float = 1e-10) -> Concurrency:
    """Common point of the contact planes of ``points`` (kernel of the 3x4 system)."""
    exact = all(isinstance(c, (int, Fraction)) for p in points for c in p)
    if exact:
        M = sympy.Matrix([[sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                           for c in _row_exact(p)] for p in points])
        ker = M.nullspace()
        if len(ker) != 1:
            return Concurrency((), len(ker))
        v = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in ker[0]]
        return Concurrency(normalize(v), 1)
    A = np.array([J @ np.asarray(p) for p in points])
    # w(x, p) = x^T J p, so each row is J p
    _, s, vt = np.linalg.svd(A)
    full = np.concatenate([s, np.zeros(4 - len(s))])
    k = int(np.sum(full < tol * full[0]))
    return Concurrency(normalize(vt[-1]) if k == 1 else np.array([]), k, full.tolist())


def _row_exact(p):
    # row of x -> w(x, p) = x0 p2 - x2 p0 + x1 p3 - x3 p1
    return (p[2], p[3], -p[0], -p[1])


def chart_index(x) -> int:
    return int(np.argmax(np.abs(np.asarray(x))))


def first_integral_check(curve: ParamCurve, x, i: int, s: float, *, direction=None) -> float:
    """Deviation |t_i(y) - t_i(x)| for y = x + s (g(t_i) - x) in the affine chart of x.

    With ``direction`` given, y = x + s * direction instead (control run).
    """
    x = np.asarray(x, dtype=float)
    roots = web_roots(curve, x)
    ti = roots[i]
    k = chart_index(x)
    xa = x / x[k]
    if direction is None:
        p = curve(ti)
        if abs(p[k]) < 1e-3 * np.max(np.abs(p)):
            # the chart of x misses g(t_i); use a coordinate where both are large
            k2 = int(np.argmax(np.minimum(np.abs(x) / np.max(np.abs(x)), np.abs(p) / np.max(np.abs(p)))))
            log.info("chart change %d -> %d for leaf %d", k, k2, i)
            k = k2
            xa = x / x[k]
        y = xa + s * (p / p[k] - xa)
    else:
        y = xa + s * np.asarray(direction, dtype=float)
    new = web_roots(curve, y)
    return float(np.min(np.abs(np.asarray(new) - ti)))


# leaf-space coordinates --------------------------------------------------

@dataclass
class LeafData:
    """Per-foliation first integrals (t_i, s_i) and their gradients in chart coordinates."""

    t: np.ndarray
    s: np.ndarray
    dt: np.ndarray  # shape (3, 3): row i = gradient of t_i
    ds: np.ndarray


def chart_basis(k: int) -> np.ndarray:
    """4x3 matrix whose columns are the chart directions (coordinate k fixed)."""
    return np.eye(4)[:, [j for j in range(4) if j != k]]


def leaf_data(curve: ParamCurve, x, k: int) -> LeafData:
    """First integrals of the three foliations at x and their derivatives.

    The leaf through x and g(t) lies in the contact plane of g(t), spanned by
    g(t), e1(t), e2(t) (the frame of the curve).  Writing x = a g + b e1 + c e2
    gives the leaf-space coordinate s = b / c.  Derivatives are analytic: the
    incidence gives dt, and d(a, b, c) follows from differentiating the frame
    equation with an auxiliary column transverse to the plane.
    """
    x = np.asarray(x, dtype=float)
    E = chart_basis(k)
    roots = np.asarray(web_roots(curve, x))
    if np.iscomplexobj(roots):
        raise SampleRejected("complex leaf parameters")
    n = len(roots)
    ts, ss = np.empty(n), np.empty(n)
    dts, dss = np.empty((n, 3)), np.empty((n, 3))
    for i, t in enumerate(roots):
        g, g1 = curve(t), curve(t, 1)
        # dt = -w(dx, g) / w(x, g')
        denom = contact_pair(x, g1)
        dt = -np.array([contact_pair(E[:, j], g) for j in range(3)]) / denom
        F = curve.frame_at(t)
        Fp = curve.frame_at(t, 1)
        nvec = (J.T @ g) / (g @ g)  # w(g, n) = 1, so n is transverse
        M = np.column_stack([F, nvec])
        y = np.linalg.solve(M, x)
        if abs(y[3]) > 1e-8 * np.max(np.abs(y)):
            raise SampleRejected("point not in the contact plane of its root")
        _, b, c, _ = y
        if abs(c) < 1e-10 * max(1.0, abs(b)):
            raise SampleRejected("leaf-space chart singular (c = 0)")
        # M dy = dx - (Fp y[:3]) dt, column by column over chart directions
        rhs = E - np.outer(Fp @ y[:3], dt)
        dy = np.linalg.solve(M, rhs)
        ts[i] = t
        ss[i] = b / c
        dts[i] = dt
        dss[i] = (dy[1] * c - b * dy[2]) / c ** 2
    return LeafData(ts, ss, dts, dss)
