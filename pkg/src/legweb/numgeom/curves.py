"""Polynomial curves t -> C^4 and the frames of their contact planes."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np

from ..symkernel import REGISTRY, Origin, Poly, parse_poly
from .contact import contact_pair

FRAMES = ("osculating", "kernel")


def _coeffs(p: Poly, var: str) -> tuple[Fraction, ...]:
    if p.symbols() - {var}:
        raise ValueError(f"curve coordinate {p.to_text()} involves symbols other than {var}")
    deg = p.degree_in([var])
    return tuple(p.coefficient({var: k}) for k in range(deg + 1))


@dataclass(frozen=True)
class ParamCurve:
    """Polynomial curve with exact rational coefficients (ascending powers of t)."""

    name: str
    coeffs: tuple[tuple[Fraction, ...], ...]
    frame: str = "kernel"

    def __post_init__(self):
        if len(self.coeffs) != 4:
            raise ValueError("a curve needs four coordinates")
        if self.frame not in FRAMES:
            raise ValueError(f"unknown frame {self.frame!r}")
        if self.frame == "osculating" and not self.legendrian:
            raise ValueError("the osculating frame needs a Legendrian curve")

    @classmethod
    def parse(cls, name: str, coords: list[str], frame: str = "kernel") -> ParamCurve:
        REGISTRY.register("t", None, Origin.COORDINATE)
        return cls(name, tuple(_coeffs(parse_poly(c), "t") for c in coords), frame)

    @property
    def degree(self) -> int:
        return max(len(c) for c in self.coeffs) - 1

    def poly(self, i: int, k: int = 0) -> np.polynomial.Polynomial:
        p = np.polynomial.Polynomial([float(c) for c in self.coeffs[i]] or [0.0])
        return p.deriv(k) if k else p

    def exact_poly(self, i: int) -> list[Fraction]:
        return list(self.coeffs[i])

    def __call__(self, t, k: int = 0) -> np.ndarray:
        return np.array([self.poly(i, k)(t) for i in range(4)])

    def exact(self, t: Fraction) -> tuple[Fraction, ...]:
        return tuple(sum((c * t ** n for n, c in enumerate(cs)), Fraction(0)) for cs in self.coeffs)

    def legendrian_residual(self) -> list[Fraction]:
        """Coefficients of w(g, g') as a polynomial in t (exact)."""
        g = [list(c) for c in self.coeffs]
        dg = [[n * c for n, c in enumerate(cs)][1:] for cs in self.coeffs]
        return _pair_poly(g, dg)

    @property
    def legendrian(self) -> bool:
        return all(c == 0 for c in self.legendrian_residual())

    def incidence(self, x) -> np.ndarray:
        """Coefficients (ascending) of t -> w(x, g(t))."""
        return np.array(_pair_poly([[c] for c in x], [list(map(float, c)) for c in self.coeffs]),
                        dtype=complex if np.iscomplexobj(x) else float)

    def exact_incidence(self, x) -> list[Fraction]:
        return _pair_poly([[Fraction(c)] for c in x], [list(c) for c in self.coeffs])

    def frame_at(self, t, k: int = 0) -> np.ndarray:
        """Columns g, e1, e2 spanning the contact plane at g(t) (k-th t-derivative)."""
        if self.frame == "osculating":
            return np.column_stack([self(t, k), self(t, k + 1), self(t, k + 2)])
        # kernel of the covector w(g, .) = (-g2, -g3, g0, g1); linear in g, so exact for any k
        g = self(t, k)
        c = np.array([-g[2], -g[3], g[0], g[1]])
        z = np.zeros_like(c[0])
        return np.column_stack([g, np.array([c[1], -c[0], z, z]), np.array([z, z, c[3], -c[2]])])


def _pair_poly(x: list[list], y: list[list]) -> list:
    """Coefficients of w(x(t), y(t)) for coordinate polynomials given ascending."""

    def mul(a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            for j, v in enumerate(b):
                out[i + j] = out[i + j] + u * v
        return out

    def add(a, b, s=1):
        n = max(len(a), len(b))
        a = a + [0] * (n - len(a))
        b = b + [0] * (n - len(b))
        return [u + s * v for u, v in zip(a, b)]

    r = add(mul(x[0], y[2]), mul(x[2], y[0]), -1)
    r = add(r, mul(x[1], y[3]))
    r = add(r, mul(x[3], y[1]), -1)
    while len(r) > 1 and r[-1] == 0:
        r.pop()
    return r


@lru_cache(maxsize=None)
def curve_specs() -> dict[str, dict]:
    return json.loads(resources.files("legweb.data").joinpath("curves.json").read_text())


def load_curve(name: str) -> ParamCurve:
    specs = curve_specs()
    if name not in specs:
        raise KeyError(f"unknown curve {name!r}; known: {sorted(specs)}")
    s = specs[name]
    return ParamCurve.parse(name, s["coords"], s.get("frame", "kernel"))


def reference_cubic() -> ParamCurve:
    """The Legendrian twisted cubic (1, t, t^3, -3t^2)."""
    c = load_curve("reference")
    if not c.legendrian:
        raise AssertionError("reference cubic failed its Legendrian identity")
    return c


def control_cubic() -> ParamCurve:
    return load_curve("control")


__all__ = ["ParamCurve", "contact_pair", "control_cubic", "load_curve", "reference_cubic"]
