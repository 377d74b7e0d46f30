"""Check records for the numeric dual web and the rank experiment."""
from __future__ import annotations

from dataclasses import asdict
from fractions import Fraction

import numpy as np

from ..report import Check, verdict
from .contact import NotLagrangian, contact_pair, plucker, projective_distance, quadric_residual
from .curves import ParamCurve, control_cubic, reference_cubic
from .rank import (
    RankConfig, constant_forms, forms_from_kernel, monomials, rank_estimate, sample_points, trace_test,
)
from .web import SampleRejected, concurrency_point, first_integral_check, root_report, web_roots

BASE_POINT = (1, 2, 6, -11)
GAP = 1e3


def _fl(v) -> list:
    return [float(c) for c in v]


def _root_triples(rng, n: int, lo: float = -3.0, hi: float = 3.0, sep: float = 0.3) -> list[np.ndarray]:
    out = []
    while len(out) < n:
        t = np.sort(rng.uniform(lo, hi, 3))
        if np.min(np.diff(t)) > sep:
            out.append(t)
    return out


def root_checks(curve: ParamCurve) -> list[Check]:
    x = np.array(BASE_POINT, dtype=float)
    rep = root_report(curve, x)
    err = float(np.max(np.abs(rep.roots - [1, 2, 3])))
    exact = web_roots(curve, BASE_POINT)
    checks = [
        Check("web.roots.base", "incidence-roots", verdict(err < 1e-10),
              {"roots": _fl(rep.roots), "error": err, "discriminant": rep.discriminant,
               "residual": rep.residual}),
        Check("web.roots.base-rational", "incidence-roots", verdict(exact == [1, 2, 3]),
              {"roots": [str(r) for r in exact]}),
        Check("web.roots.incidence-polynomial", "incidence-roots",
              verdict(curve.exact_incidence(BASE_POINT) == [-6, 11, -6, 1]),
              {"ascending": [str(c) for c in curve.exact_incidence(BASE_POINT)]}),
    ]
    # the curve point g(0) lies in its own contact plane
    asc0 = curve.exact_incidence((1, 0, 0, 0))
    checks.append(Check("web.roots.curve-point", "incidence-roots", verdict(asc0[0] == 0),
                        {"ascending": [str(c) for c in asc0]}))
    return checks


def roundtrip_check(curve: ParamCurve, seed: int, samples: int = 100) -> Check:
    rng = np.random.default_rng(seed)
    worst, resid, rejected = 0.0, 0.0, 0
    done = 0
    while done < samples:
        x = rng.normal(size=4)
        try:
            rep = root_report(curve, x)
        except SampleRejected:
            rejected += 1
            continue
        resid = max(resid, float(np.max(np.abs([contact_pair(x, curve(t)) for t in rep.roots]))
                                 / np.linalg.norm(x)))
        c = concurrency_point([curve(t) for t in rep.roots])
        worst = max(worst, projective_distance(c.point, x))
        done += 1
    return Check("web.roundtrip", "concurrency-law", verdict(worst < 1e-9 and resid < 1e-10),
                 {"samples": samples, "rejected": rejected, "max_projective_error": worst,
                  "max_incidence_residual": resid})


def first_integral_checks(curve: ParamCurve, seed: int, samples: int = 10) -> list[Check]:
    rng = np.random.default_rng(seed + 1)
    steps = [k / 10 for k in range(1, 10)]
    worst, control = 0.0, np.inf
    for t in _root_triples(rng, samples):
        x = np.asarray(concurrency_point([curve(ti) for ti in t]).point)
        for i in range(3):
            for s in steps:
                worst = max(worst, first_integral_check(curve, x, i, s))
        d = rng.normal(size=4)
        control = min(control, max(first_integral_check(curve, x, i, 0.1, direction=d) for i in range(3)))
    zero = first_integral_check(curve, np.array(BASE_POINT, dtype=float), 0, 0.0)
    return [
        Check("web.first-integral.leaf", "leaf-invariance", verdict(worst < 1e-9),
              {"samples": samples, "steps": steps, "max_deviation": worst}),
        Check("web.first-integral.zero-step", "leaf-invariance", verdict(zero == 0.0), {"deviation": zero}),
        Check("web.first-integral.off-leaf", "leaf-invariance", verdict(control > 1e-6),
              {"min_over_samples_of_max_deviation": control}),
    ]


def geometry_checks(curve: ParamCurve, seed: int) -> list[Check]:
    e = np.eye(4)
    rng = np.random.default_rng(seed + 2)
    u, v, w = rng.normal(size=(3, 4))
    a, b = rng.normal(size=2)
    anti = abs(contact_pair(u, v) + contact_pair(v, u))
    lin = abs(contact_pair(a * u + b * w, v) - a * contact_pair(u, v) - b * contact_pair(w, v))
    try:
        plucker(e[0], e[2])
        rejected = False
    except NotLagrangian:
        rejected = True
    gauss = max(quadric_residual(plucker(curve(t), curve(t, 1))) for t in rng.uniform(-3, 3, 50))
    gauss_exact = [quadric_residual(plucker(curve.exact(Fraction(k, 3)), _exact_deriv(curve, Fraction(k, 3))))
                   for k in range(-6, 7)]
    conc = concurrency_point([curve.exact(Fraction(t)) for t in (1, 2, 3)])
    conc_f = concurrency_point([curve(float(t)) for t in (1, 2, 3)])
    target = tuple(Fraction(c, -11) for c in BASE_POINT)
    degenerate = concurrency_point([curve.exact(Fraction(1)), curve.exact(Fraction(1)), curve.exact(Fraction(3))])
    return [
        Check("web.pairing.darboux", "contact-pairing",
              verdict(contact_pair(e[0], e[2]) == 1 and contact_pair(e[2], e[0]) == -1
                      and contact_pair(u, u) == 0),
              {}),
        Check("web.pairing.bilinear", "contact-pairing", verdict(anti < 1e-14 and lin < 1e-12),
              {"antisymmetry": anti, "linearity": lin}),
        Check("web.pairing.base-incidence", "contact-pairing",
              verdict(all(contact_pair(BASE_POINT, curve.exact(Fraction(t))) == 0 for t in (1, 2, 3))), {}),
        Check("web.plucker.standard", "pluecker-embedding",
              verdict(tuple(plucker((1, 0, 0, 0), (0, 1, 0, 0))) == (1, 0, 0, 0, 0) and rejected),
              {"non_lagrangian_rejected": rejected}),
        Check("web.curve.legendrian", "legendrian-curve",
              verdict(curve.legendrian and curve.degree == 3),
              {"residual": [str(c) for c in curve.legendrian_residual()]}),
        Check("web.curve.gauss-map", "null-curve", verdict(gauss < 1e-12 and not any(gauss_exact)),
              {"max_float_residual": gauss, "rational_points": len(gauss_exact)}),
        Check("web.concurrency.base", "concurrency-law",
              verdict(conc.point == target and projective_distance(conc_f.point, BASE_POINT) < 1e-12),
              {"point": [str(c) for c in conc.point], "kernel_dim": conc.kernel_dim,
               "float_point": _fl(conc_f.point)}),
        Check("web.concurrency.repeated", "concurrency-law", verdict(degenerate.kernel_dim == 2),
              {"kernel_dim": degenerate.kernel_dim}),
    ]


def _exact_deriv(curve: ParamCurve, t: Fraction) -> tuple[Fraction, ...]:
    out = []
    for i in range(4):
        c = curve.exact_poly(i)
        out.append(sum((k * c[k] * t ** (k - 1) for k in range(1, len(c))), Fraction(0)))
    return tuple(out)


def web_checks(seed: int = 0, curve: ParamCurve | None = None) -> list[Check]:
    curve = curve or reference_cubic()
    return [*root_checks(curve), roundtrip_check(curve, seed), *first_integral_checks(curve, seed),
            *geometry_checks(curve, seed)]


# rank experiment -----------------------------------------------------------

def control_base_point(curve: ParamCurve) -> list[float]:
    c = concurrency_point([curve.exact(Fraction(t)) for t in (1, 2, 3)])
    return _fl(c.point)


def _rank_payload(r) -> dict:
    d = r.summary()
    d["gap"] = r.gap
    return d


def rank_checks(cfg: RankConfig = RankConfig()) -> list[Check]:
    ref = reference_cubic()
    r = rank_estimate(ref, BASE_POINT, cfg)
    ok = r.kernel_dim == 3 and r.gap is not None and r.gap >= GAP
    checks = [Check("rank.reference", "maximum-rank", verdict(ok), {"config": asdict(cfg), **_rank_payload(r)})]

    ladder = {}
    expected = {0: 0, 1: 1, 2: 2, 3: 3}
    for n in expected:
        ladder[n] = rank_estimate(ref, BASE_POINT, RankConfig(**{**asdict(cfg), "degree": n})).kernel_dim
    checks.append(Check("rank.degree-ladder", "maximum-rank", verdict(ladder == expected),
                        {"kernel_dim_by_degree": {str(k): v for k, v in ladder.items()}}))

    lit = rank_estimate(ref, BASE_POINT, RankConfig(**{**asdict(cfg), "basis": "t"}))
    checks.append(Check("rank.t-only-basis", "maximum-rank", "residual-published",
                        {"kernel_dim": lit.kernel_dim, "singular_values": lit.singular_values}))

    ctl = control_cubic()
    c = rank_estimate(ctl, control_base_point(ctl), cfg)
    checks.append(Check("rank.control", "maximum-rank", verdict(c.kernel_dim < 3),
                        {"curve_legendrian": ctl.legendrian, **_rank_payload(c)}))

    checks.extend(trace_checks(ref, r, cfg))
    return checks


def trace_checks(curve: ParamCurve, r, cfg: RankConfig, x0=BASE_POINT) -> list[Check]:
    mons = monomials(cfg.degree, cfg.basis)
    s = np.array(r.singular_values)
    k, pts = sample_points(curve, x0, cfg)
    _, fresh = sample_points(curve, x0, RankConfig(**{**asdict(cfg), "seed": cfg.seed + 1000,
                                                               "samples": 100}))
    ratio = float(s[-r.kernel_dim] / s[0]) if r.kernel_dim else 0.0
    on, off = [], []
    for v in r.kernel:
        forms = forms_from_kernel(v, mons, r.base_roots, r.base_s)
        on.append(trace_test(curve, forms, pts, k))
        off.append(trace_test(curve, forms, fresh, k))
    ok_on = bool(on) and all(t.residual < 10 * ratio * t.scale for t in on)
    ok_off = bool(off) and all(t.residual < 1e-12 * t.scale for t in off)
    one = trace_test(curve, constant_forms(1.0), fresh, k)
    zero = trace_test(curve, constant_forms(0.0), fresh, k)
    return [
        Check("rank.trace.collocation", "abelian-relations", verdict(ok_on),
              {"bound_factor": 10 * ratio, "residuals": [t.residual for t in on],
               "scales": [t.scale for t in on]}),
        Check("rank.trace.fresh-points", "abelian-relations", verdict(ok_off),
              {"relative": [t.residual / t.scale for t in off]}),
        Check("rank.trace.constant", "abelian-relations", verdict(one.residual > 1e-3 * one.scale),
              {"residual": one.residual, "scale": one.scale}),
        Check("rank.trace.zero", "abelian-relations", verdict(zero.residual == 0.0), {}),
    ]
