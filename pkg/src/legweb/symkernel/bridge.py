"""Conversion between :class:`Poly` and sympy expressions.

sympy is used only for multivariate factorization over Q; all other
arithmetic stays in :mod:`legweb.symkernel.poly`.
"""
from __future__ import annotations

from fractions import Fraction

import sympy

from .poly import Poly
from .symbols import REGISTRY


def to_sympy(p: Poly) -> sympy.Expr:
    cache: dict[int, sympy.Symbol] = {}
    terms = []
    for m, c in p.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for k, e in m:
            s = cache.get(k)
            if s is None:
                s = cache[k] = sympy.Symbol(REGISTRY.by_index(k).name)
            t = t * s ** e
        terms.append(t)
    return sympy.Add(*terms)


def from_sympy(expr: sympy.Expr) -> Poly:
    expr = sympy.expand(expr)
    gens = sorted(expr.free_symbols, key=lambda s: s.name)
    if not gens:
        r = sympy.Rational(expr)
        return Poly.const(Fraction(int(r.p), int(r.q)))
    sp = sympy.Poly(expr, *gens, domain="QQ")
    names = [g.name for g in gens]
    out = Poly()
    for exps, coeff in sp.terms():
        c = Fraction(int(coeff.numerator), int(coeff.denominator))
        out = out + Poly.monomial(dict(zip(names, exps)), c)
    return out


def factor(p: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Irreducible factorization over Q: ``p = content * prod(f**m)``."""
    if p.is_constant():
        return p.constant_value(), []
    content, factors = sympy.factor_list(to_sympy(p))
    c = sympy.Rational(content)
    return Fraction(int(c.p), int(c.q)), [(from_sympy(f), int(m)) for f, m in factors]
