"""Differential forms over the fixed coframe (w1, w2, th, rho0).

A wedge monomial is stored as a 4-bit mask; bit ``i`` set means coframe
element ``i`` is present.  Factors are always kept in increasing index order,
so a mask determines the monomial and its sign convention completely.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping

from ..symkernel import ZERO, Poly

COFRAME = ("w1", "w2", "th", "rho0")
W1, W2, TH, RHO0 = 0, 1, 2, 3
DIM = 4


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _wedge_sign(a: int, b: int) -> int:
    """Sign from sorting the concatenation of masks ``a`` then ``b``."""
    inversions = 0
    for i in range(DIM):
        if a >> i & 1:
            inversions += _popcount(b & ((1 << i) - 1))
    return -1 if inversions & 1 else 1


_SIGN = [[0 if a & b else _wedge_sign(a, b) for b in range(16)] for a in range(16)]


def mask_of(indices: Iterable[int]) -> int:
    """Mask of an index sequence; raises on repeats."""
    m = 0
    for i in indices:
        if m >> i & 1:
            raise ValueError("repeated coframe element in wedge monomial")
        m |= 1 << i
    return m


def parse_monomial(text: str) -> int:
    """``"w1^w2"`` -> mask.  The factors must already be in canonical order."""
    if text.strip() in ("", "1"):
        return 0
    idx = [COFRAME.index(t.strip()) for t in text.split("^")]
    if idx != sorted(idx):
        raise ValueError(f"wedge monomial {text!r} not in canonical order")
    return mask_of(idx)


def monomial_text(m: int) -> str:
    if m == 0:
        return "1"
    return "^".join(COFRAME[i] for i in range(DIM) if m >> i & 1)


class Form:
    """Inhomogeneous element of the exterior algebra with Poly coefficients."""

    __slots__ = ("_c",)

    def __init__(self, comps: Mapping[int, Poly] | None = None):
        self._c: dict[int, Poly] = {m: p for m, p in (comps or {}).items() if not p.is_zero()}

    @classmethod
    def scalar(cls, p) -> Form:
        return cls({0: Poly.coerce(p)})

    @classmethod
    def basis(cls, i: int) -> Form:
        return cls({1 << i: Poly.const(1)})

    @classmethod
    def linear(cls, coeffs: Mapping[int, object]) -> Form:
        """One-form ``sum coeffs[i] * e_i``."""
        return cls({1 << i: Poly.coerce(c) for i, c in coeffs.items()})

    @property
    def comps(self) -> dict[int, Poly]:
        return self._c

    def is_zero(self) -> bool:
        return not self._c

    def grades(self) -> set[int]:
        return {_popcount(m) for m in self._c}

    def grade(self) -> int:
        """The unique grade of a homogeneous nonzero form (0 for the zero form)."""
        g = self.grades()
        if len(g) > 1:
            raise ValueError("form is not homogeneous")
        return g.pop() if g else 0

    def part(self, k: int) -> Form:
        return Form({m: p for m, p in self._c.items() if _popcount(m) == k})

    def coeff(self, mask: int) -> Poly:
        return self._c.get(mask, ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other: Form) -> Form:
        out = dict(self._c)
        for m, p in other._c.items():
            q = out.get(m)
            out[m] = p if q is None else q + p
        return Form(out)

    def __neg__(self) -> Form:
        return Form({m: -p for m, p in self._c.items()})

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def scale(self, p) -> Form:
        p = Poly.coerce(p)
        if p.is_zero():
            return Form()
        return Form({m: q * p for m, q in self._c.items()})

    def __mul__(self, p) -> Form:
        return self.scale(p)

    __rmul__ = __mul__

    def __xor__(self, other: Form) -> Form:
        return wedge(self, other)

    def map(self, fn: Callable[[Poly], Poly]) -> Form:
        return Form({m: fn(p) for m, p in self._c.items()})

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for p in self._c.values():
            out |= p.symbols()
        return out

    def to_text(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for m in sorted(self._c, key=lambda m: (_popcount(m), [-(m >> i & 1) for i in range(DIM)])):
            mono = monomial_text(m)
            parts.append(f"({self._c[m].to_text()})" + ("" if m == 0 else f"*{mono}"))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Form({self.to_text()!r})"


def wedge(a: Form, b: Form) -> Form:
    out: dict[int, Poly] = {}
    for ma, pa in a._c.items():
        row = _SIGN[ma]
        for mb, pb in b._c.items():
            s = row[mb]
            if not s:
                continue
            term = pa * pb
            if s < 0:
                term = -term
            m = ma | mb
            q = out.get(m)
            out[m] = term if q is None else q + term
    return Form(out)


def extract(a: Form, mono: int | str | Iterable[int]) -> Poly:
    """Coefficient of a wedge monomial given in canonical order."""
    if isinstance(mono, str):
        mono = parse_monomial(mono)
    elif not isinstance(mono, int):
        seq = list(mono)
        if seq != sorted(seq):
            raise ValueError("wedge monomial must be given in canonical order")
        mono = mask_of(seq)
    return a.coeff(mono)


w1, w2, th, rho0 = (Form.basis(i) for i in range(DIM))
w3 = -(w1 + w2)


class MatrixForm:
    """4x4 matrix of forms; entry ``(i, j)`` is row ``i``, column ``j``."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if len(rows) != DIM or any(len(r) != DIM for r in rows):
            raise ValueError("matrix forms are 4x4")
        self.rows: list[list[Form]] = rows

    @classmethod
    def zero(cls) -> MatrixForm:
        return cls([[Form() for _ in range(DIM)] for _ in range(DIM)])

    def __getitem__(self, ij: tuple[int, int]) -> Form:
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for i in range(DIM):
            for j in range(DIM):
                yield (i, j), self.rows[i][j]

    def map(self, fn: Callable[[Form], Form]) -> MatrixForm:
        return MatrixForm([[fn(f) for f in r] for r in self.rows])

    def map_coeffs(self, fn: Callable[[Poly], Poly]) -> MatrixForm:
        return self.map(lambda f: f.map(fn))

    def __add__(self, other: MatrixForm) -> MatrixForm:
        return MatrixForm([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: MatrixForm) -> MatrixForm:
        return MatrixForm([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> MatrixForm:
        return self.map(lambda f: -f)

    def __xor__(self, other: MatrixForm) -> MatrixForm:
        return matrix_wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixForm):
            return NotImplemented
        return self.rows == other.rows

    def is_zero(self) -> bool:
        return all(f.is_zero() for _, f in self.entries())

    def nonzero_entries(self) -> list[tuple[int, int]]:
        return [ij for ij, f in self.entries() if not f.is_zero()]

    def transpose(self) -> MatrixForm:
        return MatrixForm([[self.rows[j][i] for j in range(DIM)] for i in range(DIM)])

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for _, f in self.entries():
            out |= f.symbols()
        return out

    def to_json(self) -> dict[str, str]:
        return {f"{i}{j}": f.to_text() for (i, j), f in self.entries()}


def matrix_wedge(a: MatrixForm, b: MatrixForm) -> MatrixForm:
    rows = []
    for i in range(DIM):
        row = []
        for j in range(DIM):
            acc = Form()
            for k in range(DIM):
                x, y = a.rows[i][k], b.rows[k][j]
                if x.is_zero() or y.is_zero():
                    continue
                acc = acc + wedge(x, y)
            row.append(acc)
        rows.append(row)
    return MatrixForm(rows)
