"""Common zeros of small polynomial systems over C.

Branches on irreducible factors, eliminates unknowns that occur linearly
with a constant coefficient, and otherwise projects with Sylvester
resultants and back-substitutes.  Every branch taken is written to a trace,
which together with the exact substitutions forms the elimination
certificate.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .bridge import factor, from_sympy, to_sympy
from .poly import Poly, substitute


@dataclass(frozen=True)
class Component:
    """One irreducible piece of the zero set.

    ``assign`` maps solved unknowns to polynomials in the remaining symbols;
    ``constraints`` are irreducible polynomials that still have to vanish
    (hypersurface pieces, or algebraic numbers given by a minimal polynomial).
    """

    assign: tuple[tuple[str, Poly], ...]
    constraints: tuple[Poly, ...]
    free: tuple[str, ...]
    dim: int

    def is_point(self) -> bool:
        return self.dim == 0 and not self.constraints

    def point(self, order: Sequence[str]) -> tuple[Fraction, ...]:
        a = dict(self.assign)
        return tuple(a[v].constant_value() for v in order)

    def as_dict(self) -> dict:
        return {
            "assign": {k: v.to_text() for k, v in self.assign},
            "constraints": [c.to_text() for c in self.constraints],
            "free": list(self.free),
            "dim": self.dim,
        }


@dataclass
class Solution:
    components: list[Component]
    ambient: tuple[str, ...]
    trace: list[str] = field(default_factory=list)

    @property
    def positive_dimensional(self) -> list[Component]:
        return [c for c in self.components if c.dim > 0]

    def points(self) -> list[tuple[Fraction, ...]]:
        return sorted({c.point(self.ambient) for c in self.components if c.is_point()})

    def as_dict(self) -> dict:
        return {
            "ambient": list(self.ambient),
            "components": [c.as_dict() for c in self.components],
            "trace": list(self.trace),
        }


class EliminationError(RuntimeError):
    pass


MAX_DEPTH = 64


def eliminate(system: Iterable[Poly], unknowns: Iterable[str]) -> Solution:
    """Zero set of ``system``; symbols outside ``unknowns`` are free parameters."""
    system = [Poly.coerce(p) for p in system]
    unknowns = list(dict.fromkeys(unknowns))
    params = sorted(set().union(*(p.symbols() for p in system)) - set(unknowns)) if system else []
    ambient = tuple(unknowns) + tuple(params)
    trace: list[str] = []
    comps = _solve(system, list(unknowns), {}, ambient, trace, 0)
    uniq: dict[tuple, Component] = {}
    for c in comps:
        key = (c.assign, c.constraints)
        uniq.setdefault(key, c)
    ordered = sorted(uniq.values(), key=lambda c: (-c.dim, [(k, v.to_text()) for k, v in c.assign],
                                                  [p.to_text() for p in c.constraints]))
    return Solution(_drop_embedded(ordered), ambient, trace)


def _drop_embedded(comps: list[Component]) -> list[Component]:
    """Remove point components that lie on a listed positive-dimensional one."""
    big = [c for c in comps if c.dim > 0]
    out = []
    for c in comps:
        if c.is_point() and any(_contains(b, c) for b in big):
            continue
        out.append(c)
    return out


def _contains(big: Component, pt: Component) -> bool:
    vals = {k: v.constant_value() for k, v in pt.assign}
    try:
        for k, v in big.assign:
            if v.evaluate(vals) != vals[k]:
                return False
        return all(p.evaluate(vals) == 0 for p in big.constraints)
    except Exception:
        return False


def _finish(assign: dict[str, Poly], constraints: list[Poly], ambient) -> Component:
    # close the assignment under itself (later solutions feed earlier ones)
    closed = dict(assign)
    for _ in range(len(closed) + 1):
        changed = False
        for k, v in closed.items():
            nv = substitute(v, {kk: vv for kk, vv in closed.items() if kk != k}, check=False)
            if nv != v:
                closed[k] = nv
                changed = True
        if not changed:
            break
    cons = tuple(sorted({_monic(substitute(p, closed, check=False)) for p in constraints},
                        key=lambda p: p.to_text()))
    cons = tuple(p for p in cons if not p.is_zero())
    free = tuple(s for s in ambient if s not in closed)
    return Component(tuple(sorted(closed.items())), cons, free, len(free) - len(cons))


def _monic(p: Poly) -> Poly:
    lc = p.lead_coefficient()
    return p / lc if lc else p


def _solve(polys, unknowns, assign, ambient, trace, depth) -> list[Component]:
    if depth > MAX_DEPTH:
        raise EliminationError("elimination recursion too deep")
    work = []
    for p in polys:
        q = substitute(p, assign, check=False) if assign else p
        if q.is_zero():
            continue
        if q.is_constant():
            trace.append(f"{_ctx(assign)}: inconsistent (nonzero constant)")
            return []
        work.append(_monic(q))
    work = sorted(set(work), key=lambda p: (len(p), p.to_text()))
    if not work:
        return [_finish(assign, [], ambient)]

    # split reducible equations
    for i, p in enumerate(work):
        _, facs = factor(p)
        distinct = [f for f, _ in facs]
        if len(distinct) > 1 or (facs and facs[0][1] > 1):
            trace.append(f"{_ctx(assign)}: factor {p.to_text()} -> "
                         + " | ".join(f"({f.to_text()})" for f in distinct))
            out = []
            rest = work[:i] + work[i + 1:]
            for f in distinct:
                out.extend(_solve(rest + [f], unknowns, assign, ambient, trace, depth + 1))
            return out

    # linear occurrence with constant coefficient
    best = None
    for p in work:
        for v in unknowns:
            if v in assign or p.degree_in([v]) != 1:
                continue
            c = p.diff(v)
            if c.is_constant():
                key = (len(p), v)
                if best is None or key < best[0]:
                    best = (key, p, v, c.constant_value())
    if best is not None:
        _, p, v, c = best
        val = (p - Poly.var(v) * c) / (-c)
        trace.append(f"{_ctx(assign)}: {v} = {val.to_text()}  from {p.to_text()}")
        new = {k: substitute(x, {v: val}, check=False) for k, x in assign.items()}
        new[v] = val
        return _solve(work, unknowns, new, ambient, trace, depth + 1)

    live = [v for v in unknowns if v not in assign and any(v in p.symbols() for p in work)]
    if not live:
        trace.append(f"{_ctx(assign)}: conditions on parameters only")
        return [_finish(assign, work, ambient)]

    # choose the unknown to project away
    def cost(v):
        occ = [p for p in work if v in p.symbols()]
        return (-len(occ), max(p.degree_in([v]) for p in occ), v)

    v = min(live, key=cost)
    occ = [p for p in work if v in p.symbols()]
    others = [p for p in work if v not in p.symbols()]
    if len(occ) == 1:
        p = occ[0]
        if not others:
            trace.append(f"{_ctx(assign)}: hypersurface {p.to_text()}")
            return [_finish(assign, [p], ambient)]
        trace.append(f"{_ctx(assign)}: postpone {p.to_text()} (only equation in {v})")
        out = []
        for comp in _solve(others, [u for u in unknowns if u != v], assign, ambient, trace, depth + 1):
            sub = dict(comp.assign)
            out.extend(_solve([p, *comp.constraints], [v], sub, ambient, trace, depth + 1))
        return out

    pivot = min(occ, key=lambda p: (p.degree_in([v]), len(p), p.to_text()))
    projected = list(others)
    sv = sympy.Symbol(v)
    for q in occ:
        if q is pivot:
            continue
        r = from_sympy(sympy.resultant(to_sympy(pivot), to_sympy(q), sv))
        trace.append(f"{_ctx(assign)}: Res_{v}({pivot.to_text()}, {q.to_text()}) = {r.to_text()}")
        if r.is_zero():
            raise EliminationError(f"vanishing resultant in {v}; common factor not split")
        projected.append(r)
    out = []
    for comp in _solve(projected, [u for u in unknowns if u != v], assign, ambient, trace, depth + 1):
        trace.append(f"back-substitute into {len(occ)} equation(s) in {v} at {_ctx(dict(comp.assign))}")
        out.extend(_solve(occ + list(comp.constraints), [v], dict(comp.assign), ambient,
                          trace, depth + 1))
    return out


def _ctx(assign: dict[str, Poly]) -> str:
    if not assign:
        return "[]"
    return "[" + ", ".join(f"{k}={v.to_text()}" for k, v in sorted(assign.items())) + "]"
