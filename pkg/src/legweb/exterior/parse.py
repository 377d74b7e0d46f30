"""Parse forms written in Python syntax.

Coframe names ``w1 w2 th rho0`` denote basis 1-forms, ``*`` is the algebra
product (wedge between forms, scaling otherwise), and ``w3``/``rho`` are the
built-in abbreviations ``-(w1 + w2)`` and ``-rho0``.
"""
from __future__ import annotations

import ast
from collections.abc import Mapping
from fractions import Fraction

from ..symkernel import REGISTRY, Origin, ParseError, Poly
from .forms import COFRAME, Form, rho0, w3, wedge

BUILTINS: dict[str, Form] = {"w3": w3, "rho": -rho0}
for _i, _n in enumerate(COFRAME):
    BUILTINS[_n] = Form.basis(_i)

Value = Poly | Form


def parse_form(text: str, macros: Mapping[str, Value] | None = None, *,
               origin: Origin = Origin.INVARIANT) -> Form:
    v = parse_value(text, macros, origin=origin)
    return v if isinstance(v, Form) else Form.scalar(v)


def parse_value(text: str, macros: Mapping[str, Value] | None = None, *,
                origin: Origin = Origin.INVARIANT) -> Value:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    env = dict(BUILTINS)
    env.update(macros or {})
    return _ev(tree.body, env, origin, text)


def _lift(v: Value) -> Form:
    return v if isinstance(v, Form) else Form.scalar(v)


def _ev(node, env, origin, text) -> Value:
    if isinstance(node, ast.BinOp):
        a = _ev(node.left, env, origin, text)
        b = _ev(node.right, env, origin, text)
        op = node.op
        if isinstance(op, ast.Add):
            return a + b if type(a) is type(b) else _lift(a) + _lift(b)
        if isinstance(op, ast.Sub):
            return a - b if type(a) is type(b) else _lift(a) - _lift(b)
        if isinstance(op, ast.Mult):
            if isinstance(a, Form) and isinstance(b, Form):
                return wedge(a, b)
            if isinstance(a, Form):
                return a.scale(b)
            if isinstance(b, Form):
                return b.scale(a)
            return a * b
        if isinstance(op, ast.Div):
            if isinstance(b, Form) or not b.is_constant() or b.is_zero():
                raise ParseError(f"division by a non-constant in {text!r}")
            c = 1 / b.constant_value()
            return a.scale(c) if isinstance(a, Form) else a * c
        if isinstance(op, ast.Pow):
            if isinstance(a, Form) or isinstance(b, Form) or not b.is_constant():
                raise ParseError(f"bad power in {text!r}")
            e = b.constant_value()
            if e.denominator != 1 or e < 0:
                raise ParseError(f"non-integer exponent in {text!r}")
            return a ** int(e)
        raise ParseError(f"unsupported operator in {text!r}")
    if isinstance(node, ast.UnaryOp):
        v = _ev(node.operand, env, origin, text)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ParseError(f"unsupported unary operator in {text!r}")
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals allowed in {text!r}")
        return Poly.const(Fraction(node.value))
    if isinstance(node, ast.Name):
        if node.id in env:
            return env[node.id]
        if node.id not in REGISTRY:
            REGISTRY.register(node.id, None, origin)
        return Poly.var(node.id)
    raise ParseError(f"unsupported syntax {type(node).__name__} in {text!r}")
