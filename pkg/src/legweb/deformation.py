"""Linear Legendrian deformations: substitution chain, compatibility system, flat rigidity."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from .exterior import (
    TH,
    W1,
    W2,
    DerivationTable,
    Form,
    MatrixForm,
    ddzero_residual,
    deformation_defect,
    mask_of,
    monomial_text,
)
from .report import Check, verdict
from .sp2model import check_sp2, normalized_phi, structure_table
from .sp2model.checks import _proportional
from .sp2model.loader import load_model, section
from .symkernel import REGISTRY, ZERO, Origin, P, Poly, collect, substitute, weight_of
from .symkernel.bridge import to_sympy
from .symkernel.eliminate import Solution, eliminate

DATA = "deformation.txt"
UNKNOWNS = ("a0", "b1", "b3")
WEIGHTS = {"a0": 1, "b0": 2, "b1": 2, "b3": 2, "c1": 3, "c2": 3, "c9": 4}
STEPS = ("set0", "set1", "set2", "set3")

WTH = {"w1^th": mask_of([W1, TH]), "w2^th": mask_of([W2, TH]), "w1^w2": mask_of([W1, W2])}


def _register() -> None:
    for name, w in WEIGHTS.items():
        REGISTRY.register(name, w, Origin.DEFORMATION)
        for s in ("1", "2", "0"):
            REGISTRY.register(f"{name}_{s}", None, Origin.DEFORMATION)


def is_deformation(name: str) -> bool:
    return REGISTRY.get(name).origin is Origin.DEFORMATION


@lru_cache(maxsize=None)
def delta_phi() -> MatrixForm:
    """The deformation with its block-shape partners filled in."""
    _register()
    m = load_model(section(DATA, "model", "template")).phi
    rows = [[m[i, j] for j in range(4)] for i in range(4)]
    rows[1][2] = rows[0][3]
    rows[3][3] = -rows[1][1]
    rows[3][2] = -rows[0][1]
    return MatrixForm(rows)


def chain_lines(step: str) -> list[tuple[str, str, Poly]]:
    """``(kind, name, value)`` with kind ``bind`` or ``lead``."""
    _register()
    out = []
    for _, line in section(DATA, "chain", step).lines:
        kind, rest = line.split(None, 1)
        lhs, rhs = rest.split("=", 1)
        out.append((kind, lhs.strip(), P(rhs)))
    return out


def in_remainder_class(p: Poly) -> bool:
    """Is ``p`` a combination of b1*a0, b3*a0, a0, b1, b3 with invariant coefficients?"""
    for (ea, eb1, eb3), _ in collect(p, list(UNKNOWNS)).items():
        if (ea, eb1 + eb3) not in {(1, 1), (1, 0), (0, 1)}:
            return False
    return True


def _solve_for(eq: Poly, name: str) -> Poly:
    c = eq.diff(name)
    if not c.is_constant() or c.is_zero():
        raise ValueError(f"{name} does not enter linearly with a constant coefficient")
    return (eq - Poly.var(name) * c.constant_value()) / (-c.constant_value())


@dataclass
class Chain:
    table: DerivationTable
    records: list[Check] = field(default_factory=list)
    solved: dict[str, Poly] = field(default_factory=dict)


def _defect(table: DerivationTable) -> MatrixForm:
    return deformation_defect(normalized_phi(), delta_phi(), table)


def _wedge_th(f: Form) -> Form:
    return Form({m: p for m, p in f.comps.items() if not m >> TH & 1})


def _lead_check(cid: str, name: str, solved: Poly, shown: Poly) -> Check:
    diff = solved - shown
    in_class = in_remainder_class(diff)
    # the unspecified terms must not matter at a flat point
    flat = flat_substitution(diff)
    w = weight_of(solved)
    ok = in_class and flat.is_zero() and w == REGISTRY.get(name).weight
    return Check(cid, "substitution-chain", verdict(ok),
                 {"symbol": name, "solved": solved.to_text(), "displayed": shown.to_text(),
                  "difference": diff.to_text(), "difference_in_remainder_class": in_class,
                  "difference_at_flat_point": flat.to_text(), "weight": str(w)})


def build_chain() -> Chain:
    """Apply the substitution chain step by step, checking each step's source."""
    _register()
    t = structure_table()
    ch = Chain(t)
    probe = ((1, 3), (3, 1), (1, 1))

    for _, name, v in chain_lines("set0"):
        t.bind(name, v, tag="set0")
    D = _defect(t)
    res = {f"{i}{j}": _wedge_th(D[i, j]).to_text() for i, j in probe}
    ch.records.append(Check("chain.set0", "substitution-chain",
                            verdict(all(v == "0" for v in res.values())),
                            {"wedge_th_residual": res}))

    for _, name, v in chain_lines("set1"):
        t.bind(name, v, tag="set1")
    D = _defect(t)
    res = {f"{i}{j}": D[i, j].to_text() for i, j in probe}
    ch.records.append(Check("chain.set1", "substitution-chain",
                            verdict(all(v == "0" for v in res.values())), {"residual": res}))

    # set2: a0_0 from the w1^w2 part of d(d a0), then b1_0 and b3_0 from the others
    lines = {name: (kind, v) for kind, name, v in chain_lines("set2")}
    r = ddzero_residual("a0", t)
    top = r.coeff(WTH["w1^w2"])
    a00 = _solve_for(top, "a0_0")
    ch.records.append(Check("chain.set2.a0_0", "substitution-chain",
                            verdict(a00 == lines["a0_0"][1]),
                            {"solved": a00.to_text(), "displayed": lines["a0_0"][1].to_text()}))
    t.bind("a0_0", a00, tag="set2")
    ch.solved["a0_0"] = a00
    r = ddzero_residual("a0", t)
    b10 = _solve_for(r.coeff(WTH["w1^th"]), "b1_0")
    b30 = _solve_for(r.coeff(WTH["w2^th"]), "b3_0")
    ch.records.append(_lead_check("chain.set2.b1_0", "b1_0", b10, lines["b1_0"][1]))
    ch.records.append(_lead_check("chain.set2.b3_0", "b3_0", b30, lines["b3_0"][1]))
    t.bind("b1_0", b10, tag="set2")
    t.bind("b3_0", b30, tag="set2")
    ch.solved.update(b1_0=b10, b3_0=b30)

    # set3: c9 from the w2^th part of (0,1)
    shown = {name: v for _, name, v in chain_lines("set3")}
    D = _defect(t)
    c9 = _solve_for(D[0, 1].coeff(WTH["w2^th"]), "c9")
    ch.records.append(_lead_check("chain.set3.c9", "c9", c9, shown["c9"]))
    t.bind("c9", c9, tag="set3")
    ch.solved["c9"] = c9
    return ch


@lru_cache(maxsize=None)
def _closed() -> Chain:
    return build_chain()


def closed_table() -> DerivationTable:
    return _closed().table.copy()


def closure_checks() -> list[Check]:
    ch = _closed()
    t = ch.table
    out = list(ch.records)
    D = _defect(t)
    sub = {f"{i}{j}": D[i, j].to_text() for i, j in ((1, 3), (3, 1), (1, 1))}
    dda0 = ddzero_residual("a0", t)
    out.append(Check("closure.prop", "deformation-closure",
                     verdict(all(v == "0" for v in sub.values()) and dda0.is_zero()),
                     {"delta": sub, "dd_a0": dda0.to_text(),
                      "remaining_nonzero": [f"{i}{j}" for i, j in D.nonzero_entries()]}))

    # deformation symbols left after the chain
    dphi = delta_phi().map(t.reduce_form)
    leftover = sorted(s for s in dphi.symbols() if is_deformation(s) and s not in UNKNOWNS)
    zero = dphi.map_coeffs(lambda p: substitute(p, {v: ZERO for v in UNKNOWNS}, check=False))
    out.append(Check("closure.trivial", "deformation-closure",
                     verdict(zero.is_zero() and not leftover and check_sp2(dphi).ok),
                     {"leftover_symbols": leftover, "at_zero": zero.to_json()}))

    da0 = t.d_symbol("a0")
    rem = Form({m: substitute(p, {"a0": ZERO}, check=False) for m, p in da0.comps.items()
                if m != 1 << TH})
    expect = Form.linear({W1: P("-4*b1"), W2: P("4*b3")})
    out.append(Check("closure.da0", "deformation-closure", verdict(rem == expect),
                     {"da0_mod_th_a0": rem.to_text()}))

    scan = {}
    for v in UNKNOWNS:
        syms = t.d_symbol(v).symbols()
        scan[v] = sorted(s for s in syms if is_deformation(s) and s not in UNKNOWNS)
    out.append(Check("closure.scan", "deformation-closure",
                     verdict(not any(scan.values())), {"unresolved": scan}))

    stable = all(t.reduce(v) == v for v in t.bindings.values())
    out.append(Check("closure.idempotent", "deformation-closure", verdict(stable),
                     {"bound": sorted(t.bindings)}))

    # linear parts of the w1, w2 coefficients span <a0, b1, b3>
    rows = []
    for _, f in dphi.entries():
        for k in (W1, W2):
            p = f.coeff(1 << k)
            rows.append([sympy.Rational(p.coefficient({v: 1})) for v in UNKNOWNS])
    m = sympy.Matrix(rows)
    out.append(Check("closure.mod-theta", "deformation-closure", verdict(m.rank() == 3),
                     {"rank": int(m.rank())}))
    return out


# compatibility system ---------------------------------------------------

@dataclass
class CompatSystem:
    polys: dict[str, Poly]
    provenance: dict[str, str]

    def degrees(self) -> dict[str, int]:
        return {k: p.degree_in(list(UNKNOWNS)) for k, p in self.polys.items()}

    def as_dict(self) -> dict:
        return {"polys": {k: v.to_text() for k, v in self.polys.items()},
                "provenance": self.provenance, "degrees": self.degrees()}


def _normalize(p: Poly, mono: dict[str, int]) -> Poly:
    c = p.coefficient(mono)
    if not c:
        raise ValueError(f"no {mono} term to normalize by")
    return p / c


def reduce_b(p: Poly, eq1: Poly, eq3: Poly) -> Poly:
    """Remove b1**2 with eq1 and b3**2 with eq3 (both monic in those monomials)."""
    b1, b3 = P("b1"), P("b3")
    while True:
        for (e1, e3), co in sorted(collect(p, ["b1", "b3"]).items(), reverse=True):
            if e1 >= 2:
                p = p - co * b1 ** (e1 - 2) * b3 ** e3 * eq1
                break
            if e3 >= 2:
                p = p - co * b1 ** e1 * b3 ** (e3 - 2) * eq3
                break
        else:
            return p


@lru_cache(maxsize=None)
def compat_system() -> CompatSystem:
    t = _closed().table
    eq1 = _normalize(ddzero_residual("b1", t).coeff(WTH["w1^w2"]), {"b1": 2})
    eq3 = _normalize(ddzero_residual("b3", t).coeff(WTH["w1^w2"]), {"b3": 2})
    D = _defect(t)
    c1 = reduce_b(D[0, 2].coeff(WTH["w1^th"]), eq1, eq3)
    c2 = reduce_b(D[0, 2].coeff(WTH["w2^th"]), eq1, eq3)
    eq0 = _normalize(c2, {"a0": 5})
    k1, k2 = c1.coefficient({"a0": 5}), c2.coefficient({"a0": 5})
    eq9 = _normalize(c1 * k2 - c2 * k1, {"A0": 1, "a0": 4})
    return CompatSystem(
        {"Eq1": eq1, "Eq3": eq3, "Eq0": eq0, "Eq9": eq9},
        {"Eq1": "w1^w2 of d(d b1), monic in b1**2",
         "Eq3": "w1^w2 of d(d b3), monic in b3**2",
         "Eq0": "w2^th of (0,2) mod Eq1, Eq3, monic in a0**5",
         "Eq9": "w1^th and w2^th of (0,2) mod Eq1, Eq3, combined to cancel a0**5"})


def leading_part(name: str, p: Poly) -> Poly:
    """The part quoted for each polynomial."""
    if name in ("Eq1", "Eq3"):
        keep = lambda e: sum(e[1:]) == 2  # noqa: E731
    else:
        top = max(e[0] for e in collect(p, list(UNKNOWNS)))
        keep = lambda e: e[0] == top or (name == "Eq0" and e[0] >= 4)  # noqa: E731
    out = ZERO
    for e, co in collect(p, list(UNKNOWNS)).items():
        if keep(e):
            out = out + co * Poly.monomial(dict(zip(UNKNOWNS, e)))
    return out


def _quoted(kind: str) -> dict[str, Poly]:
    return {lhs.strip(): P(rhs) for lhs, rhs in
            (line.split("=", 1) for _, line in section(DATA, "compat", kind).lines)}


def _fresh(p: Poly) -> list[str]:
    return sorted(s for s in p.symbols() if REGISTRY.get(s).origin is Origin.FRESH)


def compat_checks() -> list[Check]:
    cs = compat_system()
    quoted = _quoted("leading")
    out = []
    expected_deg = {"Eq1": 4, "Eq3": 4, "Eq0": 5, "Eq9": 4}
    expected_wt = {"Eq1": 4, "Eq3": 4, "Eq0": 5, "Eq9": 5}
    for name, p in cs.polys.items():
        lead = leading_part(name, p)
        w = weight_of(p)
        ok = (_proportional(lead, quoted[name]) and not _fresh(lead)
              and p.degree_in(list(UNKNOWNS)) == expected_deg[name] and w == expected_wt[name])
        out.append(Check(f"compat.{name}", "compatibility-system", verdict(ok),
                         {"leading": lead.to_text(), "quoted": quoted[name].to_text(),
                          "degree": p.degree_in(list(UNKNOWNS)), "weight": str(w),
                          "fresh_in_leading": _fresh(lead), "fresh_anywhere": _fresh(p),
                          "terms": len(p), "provenance": cs.provenance[name],
                          "polynomial": p.to_text()}))
    t = _closed().table
    D = _defect(t)
    eq1, eq3 = cs.polys["Eq1"], cs.polys["Eq3"]
    rest = {}
    for (i, j) in ((0, 1), (0, 3)):
        for m, p in D[i, j].comps.items():
            rest[f"{i}{j}:{monomial_text(m)}"] = reduce_b(p, eq1, eq3).to_text()
    rest["02:w1^w2"] = reduce_b(D[0, 2].coeff(WTH["w1^w2"]), eq1, eq3).to_text()
    out.append(Check("compat.remaining-components", "compatibility-system",
                     verdict(all(v == "0" for v in rest.values())), {"reduced": rest}))
    return out


def bounds() -> tuple[int, int]:
    d = compat_system().degrees()
    return d["Eq1"] * d["Eq3"] * d["Eq0"] + 1, d["Eq1"] * d["Eq3"] * d["Eq9"] + 1


def bounds_check() -> Check:
    b = bounds()
    cs = compat_system()
    l1 = to_sympy(leading_part("Eq1", cs.polys["Eq1"]))
    l3 = to_sympy(leading_part("Eq3", cs.polys["Eq3"]))
    g = sympy.gcd(l1, l3)
    # dehomogenized: b3 = 1
    b1 = sympy.Symbol("b1")
    gu = sympy.gcd(l1.subs(sympy.Symbol("b3"), 1), l3.subs(sympy.Symbol("b3"), 1), b1)
    ok = b == (81, 65) and g.is_number and gu.is_number
    return Check("bounds", "linearization-bound", verdict(ok),
                 {"bounds": list(b), "degrees": cs.degrees(), "gcd_leading": str(g),
                  "gcd_dehomogenized": str(gu)})


# flat point ----------------------------------------------------------------

def flat_substitution(p: Poly) -> Poly:
    return substitute(p, {s: ZERO for s in p.symbols() if s not in UNKNOWNS}, check=False)


def flat_reduce() -> list[Poly]:
    cs = compat_system().polys
    return [flat_substitution(cs["Eq1"] - cs["Eq3"]), flat_substitution(cs["Eq1"]),
            flat_substitution(cs["Eq0"])]


def flat_reduce_check() -> Check:
    got = flat_reduce()
    quoted = list(_quoted("flat").values())
    ok = [_proportional(a, b) for a, b in zip(got, quoted)]
    return Check("flat.reduce", "flat-rigidity", verdict(all(ok)),
                 {"reduced": [p.to_text() for p in got], "quoted": [p.to_text() for p in quoted],
                  "proportional": ok})


def flat_solve() -> Solution:
    return eliminate(flat_reduce(), UNKNOWNS)


def grid_scan(polys: list[Poly], radius: int = 3, denominators=(1, 2, 3)) -> list[tuple]:
    """Rational points in a small grid where all ``polys`` vanish."""
    vals = sorted({Fraction(n, d) for d in denominators for n in range(-radius * d, radius * d + 1)})
    hits = []
    for pt in itertools.product(vals, repeat=3):
        env = dict(zip(UNKNOWNS, pt))
        if all(p.evaluate(env) == 0 for p in polys):
            hits.append(pt)
    return hits


def flat_checks() -> list[Check]:
    out = [flat_reduce_check()]
    sol = flat_solve()
    pts = sol.points()
    origin = [(Fraction(0),) * 3]
    ok = pts == origin and not sol.positive_dimensional and len(sol.components) == 1
    out.append(Check("flat.solve", "flat-rigidity", verdict(ok),
                     {"solution": sol.as_dict(), "points": [[str(x) for x in p] for p in pts]}))

    scan = grid_scan(flat_reduce())
    out.append(Check("flat.scan", "flat-rigidity", verdict(scan == origin),
                     {"zeros": [[str(x) for x in p] for p in scan]}))

    f = flat_reduce()
    eq = [substitute(p, {"b3": P("b1")}) for p in f]
    s2 = eliminate(eq, ["a0", "b1"])
    a0_zero = all(dict(c.assign).get("a0") == ZERO for c in s2.components)
    out.append(Check("flat.branch-b1-eq-b3", "flat-rigidity", verdict(a0_zero),
                     {"solution": s2.as_dict()}))

    s3 = eliminate(f[:2], UNKNOWNS)
    out.append(Check("flat.without-Eq0", "flat-rigidity", verdict(bool(s3.positive_dimensional)),
                     {"components": [c.as_dict() for c in s3.components]}))
    return out


# vanishing orders --------------------------------------------------------

def _depth(name: str) -> tuple[str, int] | None:
    """(base invariant, derivative order); every index is one order."""
    parts = name.split("_")
    base = parts[0]
    if base not in REGISTRY or REGISTRY.get(base).origin is Origin.DEFORMATION:
        return None
    return base, len(parts) - 1


def vanishing_orders() -> dict[str, int]:
    return {lhs.strip(): int(rhs) for lhs, rhs in
            (line.split("=", 1) for _, line in section(DATA, "vanishing", "rigidity").lines)}


def impose_vanishing(p: Poly, orders: dict[str, int]) -> Poly:
    """Zero every derivative of order <= k of a base that vanishes to order k.

    Order 0 means the value alone vanishes.
    """
    zero = {}
    for s in p.symbols():
        d = _depth(s)
        if d is not None and d[0] in orders and d[1] <= orders[d[0]]:
            zero[s] = ZERO
    return substitute(p, zero, check=False)


def rigidity_check(orders: dict[str, int] | None = None) -> Check:
    orders = vanishing_orders() if orders is None else orders
    cs = compat_system().polys
    got = [impose_vanishing(cs["Eq1"] - cs["Eq3"], orders), impose_vanishing(cs["Eq1"], orders),
           impose_vanishing(cs["Eq0"], orders)]
    flat = flat_reduce()
    surviving = {n: (g - f).to_text() for n, g, f in zip(("Eq1-Eq3", "Eq1", "Eq0"), got, flat)
                 if g != f}
    return Check("rigidity.vanishing-orders", "flat-rigidity", verdict(not surviving),
                 {"orders": orders, "surviving": surviving})


def deformation_checks() -> list[Check]:
    out = closure_checks()
    out.extend(compat_checks())
    out.append(bounds_check())
    out.extend(flat_checks())
    out.append(rigidity_check())
    weaker = dict(vanishing_orders(), A0=2)
    c = rigidity_check(weaker)
    out.append(Check("rigidity.weaker-A0", "flat-rigidity", "residual-published"
                     if c.verdict == "fail" else "pass", c.payload))
    return out
