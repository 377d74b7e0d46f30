"""Derivation tables, the exterior derivative and the two defect operators."""
from __future__ import annotations

import threading
from collections.abc import Iterable, Mapping
from fractions import Fraction

from ..symkernel import REGISTRY, CyclicBindings, Origin, Poly, substitute
from ..symkernel.poly import MissingWeight
from .forms import DIM, RHO0, Form, MatrixForm, matrix_wedge, wedge

#: derivative-name suffix for each coframe direction
SUFFIX = {0: "1", 1: "2", 2: "0"}


class DerivationTable:
    """Exterior derivatives of scalar symbols and of the coframe.

    Three layers determine ``dX``:

    * ``bindings`` eliminate symbols outright (``X = expr``); a bound symbol is
      differentiated through its value.  Bindings are kept triangular: no
      right-hand side mentions a bound name.
    * ``entries`` give ``dX`` explicitly.
    * otherwise, under the ``fresh`` policy, the generic entry
      ``-w X rho0 + X_1 w1 + X_2 w2 + X_0 th`` is used and recorded in
      :attr:`fresh_log`.
    """

    def __init__(self, *, policy: str = "fresh"):
        if policy not in ("fresh", "strict"):
            raise ValueError("policy must be 'fresh' or 'strict'")
        self.policy = policy
        self.entries: dict[str, Form] = {}
        self.bindings: dict[str, Poly] = {}
        self.coframe: dict[int, Form] | None = None
        self.fresh_log: list[str] = []
        self.tags: dict[str, str] = {}
        self._cache: dict[str, Form] = {}
        self._lock = threading.Lock()

    # construction ---------------------------------------------------------
    def copy(self) -> DerivationTable:
        t = DerivationTable(policy=self.policy)
        t.entries = dict(self.entries)
        t.bindings = dict(self.bindings)
        t.coframe = None if self.coframe is None else dict(self.coframe)
        t.fresh_log = list(self.fresh_log)
        t.tags = dict(self.tags)
        return t

    def set_entry(self, name: str, form: Form, *, tag: str | None = None) -> None:
        """Register ``d name = form``; a ``-k name rho0`` term fixes the weight ``k``."""
        if form.grades() - {1}:
            raise ValueError(f"entry for {name} is not a 1-form")
        REGISTRY.register(name)
        rho = form.coeff(1 << RHO0)
        x = Poly.var(name)
        if not rho.is_zero():
            k = rho.terms.get(next(iter(x.terms)))
            if k is not None and len(rho.terms) == 1:
                w = -k
                if w.denominator == 1:
                    REGISTRY.register(name, int(w))
        self.entries[name] = form
        if tag:
            self.tags[name] = tag
        self._cache.clear()

    def bind(self, name: str, value, *, tag: str | None = None) -> None:
        """Add ``name = value``, keeping the binding set triangular."""
        REGISTRY.register(name)
        v = self.reduce(Poly.coerce(value))
        if name in v.symbols():
            raise CyclicBindings(f"binding for {name} refers to itself after reduction")
        if name in self.bindings:
            if self.bindings[name] != v:
                raise ValueError(f"{name} already bound to a different value")
            return
        for k, old in self.bindings.items():
            if name in old.symbols():
                self.bindings[k] = substitute(old, {name: v}, check=False)
        self.bindings[name] = v
        if tag:
            self.tags[name] = tag
        self._cache.clear()

    def set_coframe(self, diffs: Mapping[int, Form]) -> None:
        if set(diffs) != set(range(DIM)):
            raise ValueError("coframe differentials needed for all four elements")
        self.coframe = {i: diffs[i] for i in range(DIM)}
        self._cache.clear()

    # evaluation -----------------------------------------------------------
    def reduce(self, p: Poly) -> Poly:
        if not self.bindings:
            return p
        return substitute(p, self.bindings, check=False)

    def reduce_form(self, f: Form) -> Form:
        return f.map(self.reduce) if self.bindings else f

    def generic_entry(self, name: str) -> Form:
        sym = REGISTRY.get(name)
        if sym.weight is None:
            raise MissingWeight(f"{name} has no weight; cannot form its generic derivative")
        coeffs: dict[int, Poly] = {RHO0: Poly.var(name) * (-sym.weight)}
        for i, suf in SUFFIX.items():
            child = f"{name}_{suf}"
            origin = Origin.DEFORMATION if sym.origin is Origin.DEFORMATION else Origin.FRESH
            REGISTRY.register(child, None, origin)
            coeffs[i] = Poly.var(child)
        return Form.linear(coeffs)

    def d_symbol(self, name: str) -> Form:
        hit = self._cache.get(name)
        if hit is not None:
            return hit
        if name in self.bindings:
            out = self.d_poly(self.bindings[name])
        elif name in self.entries:
            out = self.reduce_form(self.entries[name])
        elif self.policy == "fresh":
            with self._lock:
                if name not in self.fresh_log:
                    self.fresh_log.append(name)
            out = self.reduce_form(self.generic_entry(name))
        else:
            raise KeyError(f"no derivative registered for {name}")
        self._cache[name] = out
        return out

    def d_poly(self, p: Poly) -> Form:
        p = self.reduce(p)
        acc = Form()
        for name in sorted(p.symbols()):
            acc = acc + self.d_symbol(name).scale(p.diff(name))
        return acc

    def d_basis(self, mask: int) -> Form:
        if self.coframe is None:
            raise RuntimeError("coframe differentials not set")
        idx = [i for i in range(DIM) if mask >> i & 1]
        acc = Form()
        for pos, i in enumerate(idx):
            left = Form({_mask(idx[:pos]): Poly.const(1)})
            right = Form({_mask(idx[pos + 1:]): Poly.const(1)})
            term = wedge(wedge(left, self.coframe[i]), right)
            acc = acc + (term if pos % 2 == 0 else -term)
        return acc

    def d(self, a: Form) -> Form:
        acc = Form()
        for m, p in a.comps.items():
            dp = self.d_poly(p)
            if not dp.is_zero():
                acc = acc + wedge(dp, Form({m: Poly.const(1)}))
            if m:
                acc = acc + self.d_basis(m).scale(self.reduce(p))
        return acc

    def d_matrix(self, m: MatrixForm) -> MatrixForm:
        return m.map(self.d)

    def fresh_symbols(self) -> list[str]:
        """Names introduced by the generic policy, in creation order."""
        out = []
        for name in self.fresh_log:
            out.extend(f"{name}_{s}" for s in ("1", "2", "0"))
        return out


def _mask(idx: Iterable[int]) -> int:
    m = 0
    for i in idx:
        m |= 1 << i
    return m


def d(a: Form, table: DerivationTable) -> Form:
    return table.d(a)


def mc_defect(phi: MatrixForm, table: DerivationTable) -> MatrixForm:
    """``d phi + phi ^ phi``."""
    phi = phi.map(table.reduce_form)
    return (table.d_matrix(phi) + matrix_wedge(phi, phi)).map(table.reduce_form)


def deformation_defect(phi: MatrixForm, dphi: MatrixForm, table: DerivationTable) -> MatrixForm:
    """``d(dphi) + dphi ^ phi + phi ^ dphi + dphi ^ dphi``."""
    phi = phi.map(table.reduce_form)
    dphi = dphi.map(table.reduce_form)
    out = (table.d_matrix(dphi) + matrix_wedge(dphi, phi) + matrix_wedge(phi, dphi)
           + matrix_wedge(dphi, dphi))
    return out.map(table.reduce_form)


def ddzero_residual(x: str, table: DerivationTable) -> Form:
    return table.reduce_form(table.d(table.d_symbol(x)))


class CoframeSolveError(ValueError):
    pass


def solve_coframe(phi: MatrixForm, table: DerivationTable) -> dict[int, Form]:
    """Coframe differentials forced by the vanishing of column 0 of ``d phi + phi ^ phi``.

    Column 0 must be a constant invertible combination of the coframe.
    """
    M = [[Fraction(0)] * DIM for _ in range(DIM)]
    for i in range(DIM):
        f = phi[i, 0]
        if f.grades() - {1}:
            raise CoframeSolveError(f"entry ({i},0) is not a 1-form")
        for j in range(DIM):
            c = f.coeff(1 << j)
            if not c.is_constant():
                raise CoframeSolveError(f"entry ({i},0) has a non-constant coefficient")
            M[i][j] = c.constant_value()
    inv = _invert(M)
    sq = matrix_wedge(phi, phi)
    rhs = [-table.reduce_form(sq[i, 0]) for i in range(DIM)]
    out = {}
    for j in range(DIM):
        acc = Form()
        for i in range(DIM):
            if inv[j][i]:
                acc = acc + rhs[i].scale(inv[j][i])
        out[j] = acc
    return out


def _invert(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            raise CoframeSolveError("column 0 does not span the coframe")
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]
