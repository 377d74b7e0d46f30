"""Exact sparse multivariate polynomials over the rationals."""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .symbols import REGISTRY, Origin, Symbol, SymbolError

#: hard cap on a single exponent; every expression handled here stays far below it
MAX_EXPONENT = 64

Monomial = tuple[tuple[int, int], ...]
ONE: Monomial = ()


class ExponentOverflow(ArithmeticError):
    pass


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ka, ea = a[i]
        kb, eb = b[j]
        if ka == kb:
            e = ea + eb
            if e > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {e} exceeds {MAX_EXPONENT}")
            out.append((ka, e))
            i += 1
            j += 1
        elif ka < kb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient expected, got {type(c).__name__}")


class Poly:
    """Immutable polynomial with rational coefficients.

    ``terms`` maps a sparse monomial (sorted ``(symbol index, exponent)`` pairs)
    to a nonzero :class:`~fractions.Fraction`.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None, *, _trusted=False):
        if terms is None:
            self._terms: dict[Monomial, Fraction] = {}
        elif _trusted:
            self._terms = terms  # type: ignore[assignment]
        else:
            self._terms = {m: _as_fraction(c) for m, c in terms.items() if c != 0}
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def const(cls, c) -> Poly:
        c = _as_fraction(c)
        return cls({ONE: c}, _trusted=True) if c else cls()

    @classmethod
    def var(cls, name: str | Symbol) -> Poly:
        sym = name if isinstance(name, Symbol) else REGISTRY.get(name)
        return cls({((sym.index, 1),): Fraction(1)}, _trusted=True)

    @classmethod
    def coerce(cls, x) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, str):
            from .parse import parse_poly
            return parse_poly(x)
        return cls.const(x)

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff=1) -> Poly:
        mono = tuple(sorted((REGISTRY.get(n).index, e) for n, e in powers.items() if e))
        return cls({mono: _as_fraction(coeff)})

    # basic protocol -------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(ONE, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = _coerce_or_none(other)
            if other is None:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> Poly:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other) -> Poly:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> Poly:
        c = _as_fraction(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return Poly({m: v * c for m, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        if len(other._terms) == 1 and ONE in other._terms:
            return self.scale(other._terms[ONE])
        if len(self._terms) == 1 and ONE in self._terms:
            return other.scale(self._terms[ONE])
        out: dict[Monomial, Fraction] = {}
        items_b = list(other._terms.items())
        for ma, ca in self._terms.items():
            for mb, cb in items_b:
                m = _mono_mul(ma, mb)
                v = out.get(m)
                if v is None:
                    out[m] = ca * cb
                else:
                    out[m] = v + ca * cb
        return Poly({m: c for m, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Poly:
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("division only by nonzero rational constants")
            other = other.constant_value()
        c = _as_fraction(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / c)

    def __pow__(self, n: int) -> Poly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("non-negative integer exponents only")
        result = ONE_POLY
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # structure ------------------------------------------------------------
    def symbols(self) -> set[str]:
        return {REGISTRY.by_index(i).name for i in self._indices()}

    def _indices(self) -> set[int]:
        return {k for m in self._terms for k, _ in m}

    def degree_in(self, names: Iterable[str]) -> int:
        """Total degree in ``names``; -1 for the zero polynomial."""
        idx = {REGISTRY.get(n).index for n in names}
        if not self._terms:
            return -1
        return max(sum(e for k, e in m if k in idx) for m in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e for _, e in m) for m in self._terms)

    def diff(self, name: str) -> Poly:
        k = REGISTRY.get(name).index
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            for pos, (kk, e) in enumerate(m):
                if kk == k:
                    if e > 1:
                        nm = m[:pos] + ((k, e - 1),) + m[pos + 1:]
                    else:
                        nm = m[:pos] + m[pos + 1:]
                    out[nm] = out.get(nm, 0) + c * e
                    break
        return Poly({m: c for m, c in out.items() if c}, _trusted=True)

    def coefficient(self, powers: Mapping[str, int]) -> Fraction:
        mono = tuple(sorted((REGISTRY.get(n).index, e) for n, e in powers.items() if e))
        return self._terms.get(mono, Fraction(0))

    def lead_coefficient(self) -> Fraction:
        """Coefficient of the first monomial in canonical text order."""
        if not self._terms:
            return Fraction(0)
        return self._terms[min(self._terms, key=_mono_sort_key)]

    def substitute(self, bindings: Mapping[str, object]) -> Poly:
        """Simultaneous substitution ``name -> Poly``."""
        return substitute(self, bindings)

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate with every symbol bound to a number (exact for rationals)."""
        total = 0
        cache = {}
        for m, c in self._terms.items():
            term = c
            for k, e in m:
                v = cache.get(k)
                if v is None:
                    name = REGISTRY.by_index(k).name
                    if name not in values:
                        raise SymbolError(f"no value for {name}")
                    v = values[name]
                    if isinstance(v, int):
                        v = Fraction(v)
                    cache[k] = v
                term = term * v ** e
            total = total + term
        return total

    # text -----------------------------------------------------------------
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms, key=_mono_sort_key):
            c = self._terms[m]
            a = abs(c)
            factors = [f"{n}**{e}" if e > 1 else n for n, e in _named(m)]
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = str(a) + "*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"


def _named(m: Monomial) -> list[tuple[str, int]]:
    return sorted((REGISTRY.by_index(k).name, e) for k, e in m)


def _mono_sort_key(m: Monomial):
    return (-sum(e for _, e in m), tuple((n, -e) for n, e in _named(m)))


def _coerce_or_none(x) -> Poly | None:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return Poly.const(x)
    return None


ZERO = Poly()
ONE_POLY = Poly({ONE: Fraction(1)}, _trusted=True)


class CyclicBindings(ValueError):
    pass


def check_acyclic(bindings: Mapping[str, object]) -> None:
    """Reject binding sets whose dependency graph among bound names has a cycle."""
    deps = {k: Poly.coerce(v).symbols() & set(bindings) for k, v in bindings.items()}
    state: dict[str, int] = {}

    def visit(n: str, path: list[str]) -> None:
        s = state.get(n, 0)
        if s == 1:
            raise CyclicBindings("cyclic bindings: " + " -> ".join(path + [n]))
        if s == 2:
            return
        state[n] = 1
        for d in sorted(deps[n]):
            visit(d, path + [n])
        state[n] = 2

    for n in sorted(deps):
        visit(n, [])


def substitute(p: Poly, bindings: Mapping[str, object], *, check: bool = True) -> Poly:
    if not bindings or not p._terms:
        return p
    bound = {REGISTRY.get(name).index: Poly.coerce(val) for name, val in bindings.items()}
    if check:
        check_acyclic({REGISTRY.by_index(k).name: v for k, v in bound.items()})
    if not (p._indices() & bound.keys()):
        return p
    powers: dict[tuple[int, int], Poly] = {}
    acc: dict[Monomial, Fraction] = {}
    for m, c in p._terms.items():
        keep = []
        factor = None
        for k, e in m:
            if k in bound:
                pw = powers.get((k, e))
                if pw is None:
                    pw = powers[(k, e)] = bound[k] ** e
                factor = pw if factor is None else factor * pw
            else:
                keep.append((k, e))
        if factor is None:
            acc[m] = acc.get(m, 0) + c
            continue
        rest = tuple(keep)
        for fm, fc in factor._terms.items():
            nm = _mono_mul(rest, fm)
            acc[nm] = acc.get(nm, 0) + c * fc
    return Poly({m: c for m, c in acc.items() if c}, _trusted=True)


def var(name: str, weight: int | None = None, origin: Origin = Origin.INVARIANT) -> Poly:
    """Register (if needed) and return the polynomial ``name``."""
    REGISTRY.register(name, weight, origin)
    return Poly.var(name)


def collect(p: Poly, names: Iterable[str]) -> dict[tuple[int, ...], Poly]:
    """Split ``p`` by exponent vectors in ``names``; coefficients are free of them."""
    idx = [REGISTRY.get(n).index for n in names]
    pos = {k: i for i, k in enumerate(idx)}
    buckets: dict[tuple[int, ...], dict[Monomial, Fraction]] = {}
    for m, c in p.terms.items():
        exps = [0] * len(idx)
        rest = []
        for k, e in m:
            if k in pos:
                exps[pos[k]] = e
            else:
                rest.append((k, e))
        buckets.setdefault(tuple(exps), {})[tuple(rest)] = c
    return {k: Poly(v, _trusted=True) for k, v in sorted(buckets.items())}


@dataclass(frozen=True)
class Inhomogeneous:
    witness: tuple[str, str]

    def __str__(self) -> str:
        return "inhomogeneous"


class MissingWeight(SymbolError):
    pass


def monomial_weight(m: Monomial) -> int:
    w = 0
    for k, e in m:
        sym = REGISTRY.by_index(k)
        if sym.weight is None:
            raise MissingWeight(f"symbol {sym.name} carries no weight")
        w += sym.weight * e
    return w


def weight_of(p: Poly) -> int | Inhomogeneous | None:
    """Common scaling weight of ``p``; ``None`` for the zero polynomial."""
    first = None
    first_m = None
    for m in sorted(p.terms, key=_mono_sort_key):
        w = monomial_weight(m)
        if first is None:
            first, first_m = w, m
        elif w != first:
            return Inhomogeneous((Poly({first_m: 1}).to_text(), Poly({m: 1}).to_text()))
    return first


def homogeneous_parts(p: Poly, names: Iterable[str]) -> dict[int, Poly]:
    """Group ``p`` by total degree in ``names``."""
    names = list(names)
    out: dict[int, Poly] = {}
    for exps, coeff in collect(p, names).items():
        d = sum(exps)
        out[d] = out.get(d, ZERO) + coeff * Poly.monomial(dict(zip(names, exps)))
    return dict(sorted(out.items()))
