"""Verification checks for the matrix models."""
from __future__ import annotations

from fractions import Fraction

from ..exterior import (
    COFRAME,
    DerivationTable,
    Form,
    MatrixForm,
    ddzero_residual,
    mc_defect,
    monomial_text,
    solve_coframe,
)
from ..exterior.parse import parse_form
from ..report import Check, verdict
from ..symkernel import REGISTRY, ZERO, Inhomogeneous, Origin, P, Poly, substitute
from ..symkernel.linear import solve_linear
from .models import (
    check_sp2,
    exceptional_model,
    form_weight,
    hyperplane_model,
    normalized_phi,
    quadrics,
    structure_table,
    web_coframe,
)

EXCEPTION = "B0_0"


def _entries_json(m: MatrixForm) -> dict[str, str]:
    return {f"{i}{j}": f.to_text() for (i, j), f in m.entries() if not f.is_zero()}


def _form_json(f: Form) -> dict[str, str]:
    return {monomial_text(k): p.to_text() for k, p in sorted(f.comps.items())}


def _subst_matrix(m: MatrixForm, b) -> MatrixForm:
    return m.map_coeffs(lambda p: substitute(p, b, check=False))


def _subst_form(f: Form, b) -> Form:
    return f.map(lambda p: substitute(p, b, check=False))


def flat_phi() -> MatrixForm:
    """Normalized form with every invariant set to zero."""
    phi = normalized_phi()
    zero = {s: ZERO for s in phi.symbols()}
    return _subst_matrix(phi, zero)


# structure suite ---------------------------------------------------------

def shape_checks() -> list[Check]:
    hyp, _ = hyperplane_model()
    ex = exceptional_model()
    out = []
    for cid, m in (("shape.normalized", normalized_phi()), ("shape.hyperplane", hyp),
                   ("shape.exceptional", ex.phi)):
        r = check_sp2(m)
        out.append(Check(cid, "sp2-block-shape", verdict(r.ok), r.as_dict()))
    printed = MatrixForm([[ex.printed.get((i, j), ex.phi[i, j]) for j in range(4)] for i in range(4)])
    r = check_sp2(printed)
    out.append(Check("shape.exceptional-as-printed", "sp2-block-shape",
                     "residual-published" if not r.ok else "pass",
                     {"printed_entries": {f"{i}{j}": f.to_text() for (i, j), f in sorted(ex.printed.items())},
                      "used_entries": {f"{i}{j}": ex.phi[i, j].to_text() for (i, j) in sorted(ex.printed)},
                      **r.as_dict()}))
    return out


def table_weights(t: DerivationTable) -> dict[str, int | str]:
    out: dict[str, int | str] = {}
    for name, f in sorted(t.entries.items()):
        w = form_weight(f)
        out[name] = str(w) if isinstance(w, Inhomogeneous) else w
    for name, v in sorted(t.bindings.items()):
        lhs = REGISTRY.get(name).weight
        w = form_weight(Form.scalar(v))
        out["=" + name] = w if w == lhs or w is None else f"inhomogeneous: {lhs} vs {w}"
    return out


def structure_checks() -> list[Check]:
    out = []
    bare = structure_table(exception=False)
    full = structure_table()

    weights = table_weights(full)
    ok = all(isinstance(w, int) or w is None for w in weights.values())
    expected = {n: REGISTRY.get(n).weight for n in full.entries}
    ok = ok and all(weights[n] == expected[n] for n in full.entries)
    out.append(Check("structure.weights", "structure-equations", verdict(ok), {"weights": weights}))

    cf = full.coframe
    dth = cf[2]
    expect_dth = parse_form("-2*th*rho0 + w1*w2")
    dd = {COFRAME[i]: full.d(cf[i]).to_text() for i in range(4)}
    out.append(Check("structure.coframe", "coframe-differentials",
                     verdict(dth == expect_dth and all(v == "0" for v in dd.values())),
                     {"d": {COFRAME[i]: cf[i].to_text() for i in range(4)}, "dd": dd}))

    res = mc_defect(normalized_phi(), bare)
    rel = P(f"{EXCEPTION}") - full.bindings[EXCEPTION]
    isolated = all(
        all(_proportional(p, rel) for p in f.comps.values()) for _, f in res.entries())
    out.append(Check("structure.residual-without-exception", "exception-relation",
                     verdict(isolated and not res.is_zero()),
                     {"residual": _entries_json(res), "relation": rel.to_text()}))

    full_res = mc_defect(normalized_phi(), full)
    fresh = sorted(s for s in full_res.symbols() | normalized_phi().symbols()
                   if REGISTRY.get(s).origin is Origin.FRESH)
    out.append(Check("structure.mc-defect", "structure-equations", verdict(full_res.is_zero()),
                     {"nonzero": _entries_json(full_res),
                      "fresh_symbols": sorted(s for s in REGISTRY.names()
                                              if REGISTRY.get(s).origin is Origin.FRESH
                                              and s in _table_symbols(full)),
                      "fresh_in_phi": fresh,
                      "generic_entries_used": list(full.fresh_log)}))

    dd_bare = ddzero_residual("B0", bare)
    top = dd_bare.coeff(0b0011)
    others = [p for m, p in dd_bare.comps.items() if m != 0b0011]
    solved = {EXCEPTION: top.diff(EXCEPTION)}
    ok = (solved[EXCEPTION].is_constant() and not solved[EXCEPTION].is_zero()
          and _proportional(top, rel)
          and all(any(REGISTRY.get(s).order >= 2 for s in p.symbols()) for p in others))
    dd_full = ddzero_residual("B0", full)
    out.append(Check("structure.dd-B0", "exception-relation", verdict(ok and dd_full.is_zero()),
                     {"unbound": _form_json(dd_bare), "bound": dd_full.to_text()}))

    flat = flat_phi()
    t0 = DerivationTable(policy="strict")
    t0.set_coframe(solve_coframe(flat, t0))
    out.append(Check("structure.flat", "flat-model", verdict(mc_defect(flat, t0).is_zero()),
                     {"phi": _entries_json(flat)}))

    # abstract web coframe under the invariant dictionary
    dic = {"A0": ZERO, "A0_1": ZERO, "A0_2": ZERO, "B0": P("R/4"), "A1": P("-T/2"), "A2": P("-S/2"),
           "B1": P("L + 2*C1"), "B2": P("K + 2*C2")}
    web = web_coframe()
    rows = {}
    ok = True
    for i in range(4):
        mine = _subst_form(cf[i], dic)
        rows[COFRAME[i]] = {"derived": mine.to_text(), "web": web[i].to_text()}
        ok &= mine == web[i]
    out.append(Check("structure.web-coframe", "web-structure-equations", verdict(ok), rows))
    return out


def _table_symbols(t: DerivationTable) -> set[str]:
    out: set[str] = set()
    for f in t.entries.values():
        out |= f.symbols()
    for v in t.bindings.values():
        out |= v.symbols()
    return out


def _proportional(p: Poly, q: Poly) -> bool:
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    return p * q.lead_coefficient() == q * p.lead_coefficient()


# hyperplane suite --------------------------------------------------------

def hyperplane_checks() -> list[Check]:
    phi, t = hyperplane_model()
    out = []
    res = mc_defect(phi, t)
    out.append(Check("hyperplane.mc-defect", "hyperplane-model", verdict(res.is_zero()),
                     {"nonzero": _entries_json(res), "entries": _entries_json(phi)}))
    web = web_coframe()
    lk = {"L": ZERO, "K": ZERO}
    rows = {}
    ok = True
    for i in range(4):
        w = _subst_form(web[i], lk)
        rows[COFRAME[i]] = {"derived": t.coframe[i].to_text(), "web": w.to_text()}
        ok &= t.coframe[i] == w
    out.append(Check("hyperplane.web-coframe", "web-structure-equations", verdict(ok), rows))
    zero = _subst_matrix(phi, {"R": ZERO, "S": ZERO, "T": ZERO})
    out.append(Check("hyperplane.flat", "flat-model", verdict(zero == flat_phi()), {}))
    return out


# exceptional model -------------------------------------------------------

DA0_UNKNOWNS = ("a0_1", "a0_2", "a0_0", "a0_r")
MOD_R = {"R": P("a0**2/2")}


def _exceptional_table(S: Poly, T: Poly) -> DerivationTable:
    """Hyperplane coframe at given S, T, reduced mod a0**2 = 2R, with an unknown da0."""
    _, hyp = hyperplane_model()
    for n in ("a0",):
        REGISTRY.register(n, 1, Origin.DEFORMATION)
    REGISTRY.register("a0_r", 1, Origin.COORDINATE)
    t = DerivationTable(policy="strict")
    t.set_entry("a0", parse_form("a0_1*w1 + a0_2*w2 + a0_0*th + a0_r*rho0"))
    st = {"S": S, "T": T}
    t.set_coframe({i: _subst_form(_subst_form(hyp.coframe[i], st), MOD_R) for i in range(4)})
    return t


def derive_ST() -> tuple[dict[str, Poly], list[Poly]]:
    """S, T forced by the shared coframe (column 0 of the defect of the exceptional form)."""
    _, hyp = hyperplane_model()
    phi = exceptional_model().phi
    sq = phi ^ phi
    eqs = []
    for i in range(4):
        eqs.extend((hyp.d(phi[i, 0]) + sq[i, 0]).comps.values())
    return solve_linear(eqs, ["S", "T"])


def solve_da0() -> dict:
    """Derive da0 from the defect entries one at a time (constant pivots only)."""
    st, left = derive_ST()
    t = _exceptional_table(st["S"], st["T"])
    phi = _subst_matrix(exceptional_model().phi, MOD_R)
    res = mc_defect(phi, t)
    partial: dict[str, Poly] = {}
    provenance: dict[str, str] = {}
    per_entry: dict[str, dict[str, str]] = {}
    contradictions = []
    for (i, j), f in res.entries():
        eqs = list(f.comps.values())
        alone, _ = solve_linear(eqs, DA0_UNKNOWNS)
        if alone:
            per_entry[f"{i}{j}"] = {k: v.to_text() for k, v in sorted(alone.items())}
        for k, v in alone.items():
            if v.symbols() & set(DA0_UNKNOWNS):
                continue
            if k in partial and partial[k] != v:
                contradictions.append({"unknown": k, "candidates": [partial[k].to_text(), v.to_text()],
                                       "entries": [provenance[k], f"{i}{j}"]})
        new, _ = solve_linear(eqs, DA0_UNKNOWNS, partial)
        for k, v in new.items():
            provenance.setdefault(k, f"{i}{j}")
        partial.update(new)
        partial = {k: substitute(v, partial, check=False) for k, v in partial.items()}
    return {"ST": st, "ST_leftover": left, "solution": partial, "provenance": provenance,
            "per_entry": per_entry, "contradictions": contradictions, "table": t, "phi": phi}


def exceptional_checks() -> list[Check]:
    out = []
    data = solve_da0()
    st = data["ST"]
    ok = (not data["ST_leftover"] and st.get("S") == P("2*R") and st.get("T") == P("-2*R"))
    out.append(Check("exceptional.invariant-relation", "exceptional-relation", verdict(ok),
                     {k: v.to_text() for k, v in sorted(st.items())}))

    sol = data["solution"]
    complete = set(sol) == set(DA0_UNKNOWNS) and all(
        not (v.symbols() & set(DA0_UNKNOWNS)) for v in sol.values())
    da0 = Form.linear({0: sol.get("a0_1", P("a0_1")), 1: sol.get("a0_2", P("a0_2")),
                       2: sol.get("a0_0", P("a0_0")), 3: sol.get("a0_r", P("a0_r"))})
    ok = complete and not data["contradictions"] and da0 == parse_form("-a0*rho0")
    out.append(Check("exceptional.da0", "exceptional-model", verdict(ok),
                     {"da0": da0.to_text(), "provenance": data["provenance"],
                      "per_entry": data["per_entry"], "contradictions": data["contradictions"]}))

    t: DerivationTable = data["table"]
    t.set_entry("a0", da0)
    res = mc_defect(data["phi"], t)
    # a0 * da0 must reproduce dR = -2 R rho0 on a0**2 = 2R
    dR = _subst_form(parse_form("-2*R*rho0"), MOD_R)
    out.append(Check("exceptional.mc-defect", "exceptional-model",
                     verdict(res.is_zero() and t.d_poly(P("a0**2/2")) == dR),
                     {"nonzero": _entries_json(res)}))

    # R -> 0 forces a0 = 0 and the flat form
    degenerate = _subst_matrix(exceptional_model().phi, {"R": ZERO, "a0": ZERO})
    out.append(Check("exceptional.degenerate", "exceptional-model", verdict(degenerate == flat_phi()), {}))

    # difference with the hyperplane model is a deformation of the expected shape
    hyp, _ = hyperplane_model()
    hyp = _subst_matrix(hyp, {"S": P("2*R"), "T": P("-2*R")})
    delta = exceptional_model().phi - hyp
    template = {(1, 1): "a0*w1 + a0*w2 + 2*b0*th", (1, 3): "a0*w1 + 2*b3*th", (3, 1): "-a0*w2 - 2*b1*th",
                (0, 1): "b1*w1 + b0*w2 + 2*c1*th", (0, 3): "b0*w1 + b3*w2 + 2*c2*th",
                (0, 2): "c1*w1 + c2*w2 + c9*th"}
    vals = {"b1": P("R"), "b3": P("R"), "b0": P("R/2"), "c1": ZERO, "c2": ZERO, "c9": P("-3*R**2")}
    for n in ("b0", "b1", "b3", "c1", "c2", "c9"):
        REGISTRY.register(n, None, Origin.DEFORMATION)
    rows = [[Form() for _ in range(4)] for _ in range(4)]
    for (i, j), s in template.items():
        rows[i][j] = _subst_form(parse_form(s), vals)
    rows[1][2] = rows[0][3]
    rows[3][3] = -rows[1][1]
    rows[3][2] = -rows[0][1]
    expect = MatrixForm(rows)
    out.append(Check("exceptional.deformation-shape", "deformation-template", verdict(delta == expect),
                     {"delta": _entries_json(delta),
                      "values": {k: v.to_text() for k, v in sorted(vals.items())}}))
    return out


# quadrics ------------------------------------------------------------------

def _omega(u, v) -> Poly:
    return u[0] * v[2] - u[2] * v[0] + u[1] * v[3] - u[3] * v[1]


def _mod_r(p: Poly) -> Poly:
    return substitute(p, MOD_R, check=False)


def _da0_table() -> DerivationTable:
    t = _exceptional_table(P("2*R"), P("-2*R"))
    t.set_entry("a0", parse_form("-a0*rho0"))
    return t


#: the points and quadrics pair with the root of a0**2 = 2R opposite to the one in phi'
QUADRIC_BRANCH = -1


def _branch(q, sign: int):
    flip = {"a0": P("a0") * sign}
    forms = {n: substitute(f, flip, check=False) for n, f in q.forms.items()}
    points = {n: tuple(substitute(x, flip, check=False) for x in v) for n, v in q.points.items()}
    return forms, points


def _legendrian_pairing(c, phi: MatrixForm, t: DerivationTable) -> Form:
    # d(Z c) = Z (phi c + dc)
    move = [sum((phi[i, k].scale(c[k]) for k in range(4)), Form()) + t.d_poly(c[i]) for i in range(4)]
    lf = Form()
    for a, b, s in ((0, 2, 1), (2, 0, -1), (1, 3, 1), (3, 1, -1)):
        lf = lf + move[b].scale(c[a] * s)
    return lf.map(_mod_r)


def quadric_checks(branch: int = QUADRIC_BRANCH) -> list[Check]:
    q = quadrics()
    forms, points = _branch(q, branch)
    out = []
    W = ("W0", "W1", "W2", "W3")
    for qn in sorted(forms):
        for pn in sorted(points):
            val = _mod_r(forms[qn].substitute(dict(zip(W, points[pn]))))
            out.append(Check(f"quadrics.vanish.{qn}.{pn}", "quadric-incidence", verdict(val.is_zero()),
                             {"value": val.to_text()}))

    t = _da0_table()
    phi = _subst_matrix(exceptional_model().phi, MOD_R)
    for pn in sorted(points):
        lf = _legendrian_pairing([_mod_r(x) for x in points[pn]], phi, t)
        out.append(Check(f"quadrics.legendrian.{pn}", "legendrian-point", verdict(lf.is_zero()),
                         {"pairing": lf.to_text(), "a0_sign": branch}))

    # same root as phi': published for comparison
    other = {}
    for pn in sorted(q.points):
        lf = _legendrian_pairing([_mod_r(x) for x in q.points[pn]], phi, t)
        other[pn] = lf.to_text()
    out.append(Check("quadrics.legendrian.same-root", "legendrian-point",
                     "pass" if all(v == "0" for v in other.values()) else "residual-published",
                     {"pairings": other}))

    out.extend(covariance_checks(forms, t, phi))
    return out


def _sym_matrix(Q: Poly, W) -> list[list[Poly]]:
    """Symmetric matrix S with Q = W^t S W."""
    S = [[ZERO] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(4):
            c = Q.diff(W[i]).diff(W[j])
            S[i][j] = c / 2
    return S


def covariance_checks(forms: dict[str, Poly], t: DerivationTable, phi: MatrixForm) -> list[Check]:
    """Is span{Q_j} preserved by d, with dW = -phi W?

    For each Q = W^t S W, dQ = W^t (dS - phi^t S - S phi) W; each coframe
    coefficient of this quadratic form must lie in the span of the Q_j over
    rational functions of a0.  Rank is decided exactly by evaluating at more
    integer points than the degree of any 4x4 minor.
    """
    W = ("W0", "W1", "W2", "W3")
    mats = {n: [[_mod_r(x) for x in row] for row in _sym_matrix(forms[n], W)] for n in sorted(forms)}
    pairs = [(i, j) for i in range(4) for j in range(i, 4)]

    def vec(S):
        return [S[i][j] for i, j in pairs]

    base = [vec(mats[n]) for n in sorted(mats)]
    out = []
    for n in sorted(mats):
        S = mats[n]
        dQ = [[Form() for _ in range(4)] for _ in range(4)]
        for i in range(4):
            for j in range(4):
                f = t.d_poly(S[i][j])
                for k in range(4):
                    f = f - phi[k, i].scale(S[k][j]) - phi[k, j].scale(S[i][k])
                dQ[i][j] = f.map(_mod_r)
        detail = {}
        ok = True
        for e in range(4):
            comp = [dQ[i][j].coeff(1 << e) for i, j in pairs]
            r = _generic_rank(base + [comp], "a0")
            inside = r == 3
            ok &= inside
            detail[COFRAME[e]] = {"rank_with_span": r,
                                  "coefficient": {f"W{i}W{j}": p.to_text() for (i, j), p in zip(pairs, comp)
                                                  if not p.is_zero()}}
        out.append(Check(f"quadrics.covariant.{n}", "quadric-span",
                         "pass" if ok else "residual-published", detail))
    return out


def _generic_rank(rows: list[list[Poly]], var: str) -> int:
    deg = max((p.degree_in([var]) for r in rows for p in r if not p.is_zero()), default=0)
    bound = deg * min(len(rows), len(rows[0])) + 1
    best = 0
    for x in range(2, bound + 3):
        m = [[p.evaluate({var: Fraction(x)}) if not p.is_zero() else Fraction(0) for p in r] for r in rows]
        best = max(best, _rank(m))
    return best


def _rank(m: list[list[Fraction]]) -> int:
    m = [row[:] for row in m]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


# contact planes of the three points ----------------------------------------

def plane_kernel(points: list[tuple[Poly, ...]]) -> tuple[list[Poly], list[list[Poly]]]:
    """Generalized cross product of the rows x -> w(x, p_i); nonzero iff the rank is 3."""
    rows = []
    for p in points:
        # w(x, p) = x0 p2 - x2 p0 + x1 p3 - x3 p1
        rows.append([p[2], p[3], -p[0], -p[1]])
    k = []
    for a in range(4):
        minor = [[r[c] for c in range(4) if c != a] for r in rows]
        k.append(_det3(minor) * (-1) ** a)
    return k, rows


def _det3(m) -> Poly:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def intersect_planes_check() -> list[Check]:
    q = quadrics()
    pts = [q.points[n] for n in sorted(q.points)]
    out = []
    k, rows = plane_kernel(pts)
    ok = not k[0].is_zero() and all(x.is_zero() for x in k[1:])
    out.append(Check("planes.kernel", "contact-planes", verdict(ok),
                     {"kernel": [x.to_text() for x in k]}))

    bumped = [tuple(x + (1 if i == 2 else 0) for i, x in enumerate(pts[0]))] + pts[1:]
    kb, _ = plane_kernel(bumped)
    moved = any(not x.is_zero() for x in kb[1:])
    out.append(Check("planes.perturbed", "contact-planes", verdict(moved),
                     {"kernel": [x.to_text() for x in kb]}))

    zero = [tuple(substitute(x, {"a0": ZERO}) for x in p) for p in pts]
    kz, rz = plane_kernel(zero)
    m = [[x.constant_value() for x in r] for r in rz]
    dim = 4 - _rank(m)
    out.append(Check("planes.degenerate", "contact-planes", verdict(dim >= 2 and all(x.is_zero() for x in kz)),
                     {"kernel_dim": dim}))
    return out
