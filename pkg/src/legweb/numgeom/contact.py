"""Symplectic pairing on C^4, projective points and Pluecker coordinates."""
from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

import numpy as np

#: Darboux matrix: w(u, v) = u^T J v = u0 v2 - u2 v0 + u1 v3 - u3 v1
J = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)

PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (2, 3))


class NotLagrangian(ValueError):
    pass


def contact_pair(x: Sequence, y: Sequence):
    """w(x, y); exact when both arguments hold Fractions or ints."""
    # grouped so that swapping the arguments negates the result exactly in floating point
    return (x[0] * y[2] + x[1] * y[3]) - (x[2] * y[0] + x[3] * y[1])


def normalize(v: Sequence) -> np.ndarray | tuple:
    """Scale so the largest-magnitude coordinate is 1 (exact for rationals)."""
    if all(isinstance(c, (int, Fraction)) for c in v):
        k = max(range(len(v)), key=lambda i: (abs(v[i]), -i))
        if v[k] == 0:
            raise ValueError("zero vector is not a projective point")
        return tuple(Fraction(c) / v[k] for c in v)
    a = np.asarray(v)
    k = int(np.argmax(np.abs(a)))
    if a[k] == 0:
        raise ValueError("zero vector is not a projective point")
    return a / a[k]


def projective_distance(u: Sequence, v: Sequence) -> float:
    """Sine of the angle between the lines spanned by u and v."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    # norm of the component of u orthogonal to v; avoids sqrt(1 - cos^2) cancellation
    return float(np.linalg.norm(u - v * np.vdot(v, u)))


def plucker(x: Sequence, y: Sequence, *, tol: float = 1e-12):
    """Pluecker 5-vector (p01, p02, p03, p12, p23) of a Lagrangian plane.

    On the isotropic summand p13 = -p02, so the Pluecker relation becomes
    q0*q4 + q1**2 + q2*q3 = 0.
    """
    exact = all(isinstance(c, (int, Fraction)) for c in (*x, *y))
    w = contact_pair(x, y)
    if exact:
        if w != 0:
            raise NotLagrangian(f"w(x, y) = {w}")
    else:
        scale = float(np.linalg.norm(np.asarray(x, dtype=complex)) * np.linalg.norm(np.asarray(y, dtype=complex)))
        if abs(w) > tol * max(scale, 1.0):
            raise NotLagrangian(f"w(x, y) = {w}")
    p = [x[i] * y[j] - x[j] * y[i] for i, j in PLUCKER_PAIRS]
    if not exact:
        p = np.asarray(p)
        if not np.any(p):
            raise ValueError("x and y are proportional")
    return normalize(p)


def quadric_residual(q: Sequence) -> float:
    """Relative residual of q0*q4 + q1**2 + q2*q3."""
    val = q[0] * q[4] + q[1] ** 2 + q[2] * q[3]
    if isinstance(val, Fraction):
        return float(abs(val))
    scale = float(np.sum(np.abs(np.asarray(q)) ** 2))
    return float(abs(val) / scale) if scale else 0.0
