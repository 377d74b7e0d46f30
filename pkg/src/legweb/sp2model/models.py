"""The matrix models and their derivation tables.

Block layout of every 4x4 model (row i, column j)::

    [ a00  a01 | g00  g01 ]
    [ a10  a11 | g10  g11 ]
    [ b00  b01 | -a00 -a10 ]
    [ b10  b11 | -a01 -a11 ]

with ``b01 == b10`` and ``g01 == g10``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from ..exterior import DerivationTable, Form, MatrixForm, solve_coframe
from ..symkernel import REGISTRY, Inhomogeneous, Origin, Poly, parse_poly
from ..symkernel.poly import monomial_weight
from .loader import Model, apply_table, load_coframe, load_model, section

STRUCTURE = "structure.txt"
MODELS = "models.txt"

#: scaling weights of the coframe elements as form factors
COFRAME_WEIGHT = (-1, -1, -2, 0)


def form_weight(f: Form) -> int | Inhomogeneous | None:
    """Common weight of all terms of ``f``; ``None`` for the zero form."""
    seen = None
    first = None
    for m, p in sorted(f.comps.items()):
        fw = sum(COFRAME_WEIGHT[i] for i in range(4) if m >> i & 1)
        for mono in p.terms:
            w = monomial_weight(mono) + fw
            if seen is None:
                seen, first = w, (m, mono)
            elif w != seen:
                return Inhomogeneous((str(first), str((m, mono))))
    return seen


@lru_cache(maxsize=None)
def _structure_template(exception: bool) -> DerivationTable:
    t = DerivationTable()
    apply_table(section(STRUCTURE, "table", "structure"), t)
    if exception:
        apply_table(section(STRUCTURE, "bindings", "exception"), t)
    t.set_coframe(solve_coframe(normalized_phi(), t))
    return t


def structure_table(*, exception: bool = True) -> DerivationTable:
    """Derivation table of the normalized form with coframe differentials solved.

    Returns a fresh copy; callers may extend it.
    """
    return _structure_template(exception).copy()


@lru_cache(maxsize=None)
def _model(name: str) -> Model:
    return load_model(section(MODELS, "model", name))


def normalized_phi() -> MatrixForm:
    return _model("normalized").phi


@lru_cache(maxsize=None)
def _hyperplane_template() -> DerivationTable:
    t = DerivationTable(policy="strict")
    apply_table(section(MODELS, "table", "hyperplane"), t)
    t.set_coframe(solve_coframe(_model("hyperplane").phi, t))
    return t


def hyperplane_model() -> tuple[MatrixForm, DerivationTable]:
    """Vanishing-A0 model in the invariants R, S, T (with ``dR = -2 R rho0`` etc.)."""
    return _model("hyperplane").phi, _hyperplane_template().copy()


def exceptional_model() -> Model:
    """Second linearization; ``printed`` holds the entries as originally displayed."""
    return _model("exceptional")


def web_coframe() -> dict[int, Form]:
    return load_coframe(section(MODELS, "coframe", "web"))


@dataclass(frozen=True)
class Quadrics:
    forms: dict[str, Poly]
    points: dict[str, tuple[Poly, ...]]


_VEC = re.compile(r"^\[(.*)\]$")


@lru_cache(maxsize=None)
def quadrics() -> Quadrics:
    forms: dict[str, Poly] = {}
    points: dict[str, tuple[Poly, ...]] = {}
    for name in ("W0", "W1", "W2", "W3"):
        REGISTRY.register(name, None, Origin.COORDINATE)
    for _, line in section(MODELS, "quadrics", "exceptional").lines:
        lhs, rhs = (s.strip() for s in line.split("=", 1))
        m = _VEC.match(rhs)
        if m:
            points[lhs] = tuple(parse_poly(x) for x in m.group(1).split(","))
        else:
            forms[lhs] = parse_poly(rhs)
    return Quadrics(forms, points)


@dataclass(frozen=True)
class Sp2Result:
    ok: bool
    witnesses: tuple[tuple[str, str], ...]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "witnesses": [list(w) for w in self.witnesses]}


#: pairs (p, q, sign) meaning entry p must equal sign * entry q
SP2_RULES = (
    ((2, 1), (3, 0), 1),
    ((0, 3), (1, 2), 1),
    ((2, 2), (0, 0), -1),
    ((2, 3), (1, 0), -1),
    ((3, 2), (0, 1), -1),
    ((3, 3), (1, 1), -1),
)


def check_sp2(m: MatrixForm) -> Sp2Result:
    """Exact test of the symplectic block shape; failing rules are reported with their residual."""
    bad = []
    for p, q, s in SP2_RULES:
        r = m[p] - m[q] if s > 0 else m[p] + m[q]
        if not r.is_zero():
            bad.append((f"{p[0]}{p[1]} vs {'' if s > 0 else '-'}{q[0]}{q[1]}", r.to_text()))
    return Sp2Result(not bad, tuple(bad))
