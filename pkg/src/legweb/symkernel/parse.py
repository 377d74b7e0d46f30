"""Parse polynomial expressions written in Python syntax.

Only ``+ - * / **``, integer literals, names and parentheses are accepted, so
canonical text produced by :meth:`Poly.to_text` round-trips exactly.
"""
from __future__ import annotations

import ast
from collections.abc import Mapping
from fractions import Fraction

from .poly import Poly
from .symbols import REGISTRY, Origin


class ParseError(ValueError):
    pass


def parse_poly(text: str, macros: Mapping[str, Poly] | None = None, *,
               register: bool = True, origin: Origin = Origin.INVARIANT) -> Poly:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval(tree.body, macros or {}, register, origin, text)


def _eval(node, macros, register, origin, text) -> Poly:
    if isinstance(node, ast.BinOp):
        left = _eval(node.left, macros, register, origin, text)
        if isinstance(node.op, ast.Pow):
            exp = _eval(node.right, macros, register, origin, text)
            if not exp.is_constant() or exp.constant_value().denominator != 1:
                raise ParseError(f"non-integer exponent in {text!r}")
            return left ** int(exp.constant_value())
        right = _eval(node.right, macros, register, origin, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or right.is_zero():
                raise ParseError(f"division by a non-constant in {text!r}")
            return left / right.constant_value()
        raise ParseError(f"unsupported operator in {text!r}")
    if isinstance(node, ast.UnaryOp):
        val = _eval(node.operand, macros, register, origin, text)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
        raise ParseError(f"unsupported unary operator in {text!r}")
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals allowed in {text!r}")
        return Poly.const(Fraction(node.value))
    if isinstance(node, ast.Name):
        if node.id in macros:
            return macros[node.id]
        if node.id not in REGISTRY:
            if not register:
                raise ParseError(f"unknown symbol {node.id!r} in {text!r}")
            REGISTRY.register(node.id, None, origin)
        return Poly.var(node.id)
    raise ParseError(f"unsupported syntax {type(node).__name__} in {text!r}")
