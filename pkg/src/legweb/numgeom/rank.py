"""Truncated collocation estimate of the rank of a curve's dual web.

An additive relation sum_i F_i(t_i, s_i) = const among the first integrals
of the three foliations is sought with each F_i a polynomial of degree
1..N in the shifted leaf coordinates (t_i - t_i(x0), s_i - s_i(x0)).
Differentiating gives three linear conditions per sample point; the numeric
kernel of the column-normalized collocation matrix counts the relations
visible at that degree.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .curves import ParamCurve
from .web import LeafData, SampleRejected, chart_index, concurrency_point, leaf_data, root_report

BASES = ("leaf", "t")


@dataclass(frozen=True)
class RankConfig:
    samples: int = 500
    degree: int = 6
    tolerance: float = 1e-8
    radius: float = 0.3  # relative to the smallest gap between base roots
    seed: int = 0
    basis: str = "leaf"

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"basis must be one of {BASES}")
        if self.degree < 0 or self.samples < 1:
            raise ValueError("degree must be >= 0 and samples >= 1")


def monomials(degree: int, basis: str = "leaf") -> list[tuple[int, int]]:
    if basis == "t":
        return [(a, 0) for a in range(1, degree + 1)]
    return [(a, d - a) for d in range(1, degree + 1) for a in range(d, -1, -1)]


@dataclass
class RankResult:
    kernel_dim: int
    singular_values: list[float]
    gap: float | None
    used: int
    dropped: int
    columns: list[str]
    kernel: list[list[float]] = field(default_factory=list)
    base_roots: list[float] = field(default_factory=list)
    base_s: list[float] = field(default_factory=list)
    column_scale: list[float] = field(default_factory=list)

    def summary(self) -> dict:
        d = asdict(self)
        d.pop("kernel")
        return d


def sample_points(curve: ParamCurve, x0, cfg: RankConfig) -> tuple[int, np.ndarray]:
    """Deterministic sample points near x0, drawn in root space.

    A triple of distinct roots determines its point of concurrency, so sampling
    t in a ball around the roots of x0 stays off the discriminant locus.
    """
    x0 = np.asarray(x0, dtype=float)
    k = chart_index(x0)
    t0 = np.asarray(root_report(curve, x0).roots)
    if np.iscomplexobj(t0):
        raise SampleRejected("base point has complex leaf parameters")
    rng = np.random.default_rng(cfg.seed)
    d = rng.normal(size=(cfg.samples, len(t0)))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    d *= rng.uniform(size=(cfg.samples, 1)) ** (1 / len(t0))
    ts = t0 + cfg.radius * np.min(np.diff(t0)) * d
    pts = []
    for t in ts:
        x = np.asarray(concurrency_point([curve(ti) for ti in t]).point, dtype=float)
        pts.append(x / x[k] if x.size else np.full(4, np.nan))
    return k, np.array(pts)


def _row_block(L: LeafData, t0, s0, mons) -> np.ndarray:
    """3 x (3 * len(mons)) block of d(sum F_i) at one sample."""
    cols = []
    for i in range(3):
        u, v = L.t[i] - t0[i], L.s[i] - s0[i]
        for a, b in mons:
            ft = a * u ** (a - 1) * v ** b if a else 0.0
            fs = b * u ** a * v ** (b - 1) if b else 0.0
            cols.append(ft * L.dt[i] + fs * L.ds[i])
    return np.array(cols).T


def collocation(curve: ParamCurve, x0, cfg: RankConfig):
    k, pts = sample_points(curve, x0, cfg)
    base = leaf_data(curve, np.asarray(x0, dtype=float) / np.asarray(x0, dtype=float)[k], k)
    mons = monomials(cfg.degree, cfg.basis)
    blocks, dropped = [], 0
    for x in pts:
        try:
            if not np.all(np.isfinite(x)):
                raise SampleRejected("no concurrency point")
            L = leaf_data(curve, x, k)
        except (SampleRejected, np.linalg.LinAlgError):
            dropped += 1
            continue
        if np.max(np.abs(L.t - base.t)) > 0.5 * np.min(np.diff(base.t)):
            dropped += 1  # roots would be mismatched
            continue
        blocks.append(_row_block(L, base.t, base.s, mons))
    A = np.vstack(blocks) if blocks and mons else np.zeros((3 * len(blocks), 3 * len(mons)))
    names = [f"F{i + 1}:t^{a}s^{b}" for i in range(3) for a, b in mons]
    return A, names, base, len(blocks), dropped


def rank_estimate(curve: ParamCurve, x0, cfg: RankConfig = RankConfig()) -> RankResult:
    A, names, base, used, dropped = collocation(curve, x0, cfg)
    if A.shape[1] == 0:
        return RankResult(0, [], None, used, dropped, [], [], base.t.tolist(), base.s.tolist(), [])
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    An = A / norms
    _, s, vt = np.linalg.svd(An, full_matrices=False)
    if An.shape[0] < An.shape[1]:
        s = np.concatenate([s, np.zeros(An.shape[1] - An.shape[0])])
    small = s < cfg.tolerance * s[0]
    kdim = int(np.sum(small))
    asc = s[::-1]
    gap = None
    if 0 < kdim < len(s):
        gap = float(asc[kdim] / asc[kdim - 1]) if asc[kdim - 1] > 0 else float("inf")
    kernel = [(vt[-j] / norms).tolist() for j in range(1, kdim + 1)] if kdim and An.shape[0] >= An.shape[1] else []
    return RankResult(kdim, s.tolist(), gap, used, dropped, names, kernel,
                      base.t.tolist(), base.s.tolist(), norms.tolist())


@dataclass
class LeafForm:
    """A 1-form P(t, s) dt + Q(t, s) ds on the leaf space of one foliation.

    ``Pabs``/``Qabs`` optionally bound |P|, |Q| termwise (the rounding scale).
    """

    P: object
    Q: object = None
    Pabs: object = None
    Qabs: object = None

    def __call__(self, L: LeafData, i: int) -> np.ndarray:
        p = self.P(L.t[i], L.s[i]) if self.P else 0.0
        q = self.Q(L.t[i], L.s[i]) if self.Q else 0.0
        return p * L.dt[i] + q * L.ds[i]

    def magnitude(self, L: LeafData, i: int) -> float:
        pa = self.Pabs or self.P
        qa = self.Qabs or self.Q
        p = abs(pa(L.t[i], L.s[i])) if pa else 0.0
        q = abs(qa(L.t[i], L.s[i])) if qa else 0.0
        return float(p * np.linalg.norm(L.dt[i]) + q * np.linalg.norm(L.ds[i]))


@dataclass
class TraceResult:
    residual: float
    scale: float
    used: int


def trace_test(curve: ParamCurve, forms: list[LeafForm], points, k: int) -> TraceResult:
    """Max over ``points`` of |sum_i forms[i] pulled back along foliation i|.

    ``scale`` is the same maximum over sum_i |form_i| with termwise absolute
    values, so residual / scale measures cancellation.
    """
    worst = scale = 0.0
    used = 0
    for x in points:
        try:
            L = leaf_data(curve, x, k)
        except SampleRejected:
            continue
        total = sum(np.asarray(forms[i](L, i), dtype=float) for i in range(3))
        worst = max(worst, float(np.linalg.norm(total)))
        scale = max(scale, sum(forms[i].magnitude(L, i) for i in range(3)))
        used += 1
    return TraceResult(worst, scale, used)


def constant_forms(value: float = 1.0) -> list[LeafForm]:
    return [LeafForm(lambda t, s: value) for _ in range(3)]


def forms_from_kernel(vec, mons, t0, s0) -> list[LeafForm]:
    """dF_i for the relation with raw coefficients ``vec`` (one block per foliation)."""
    vec = np.asarray(vec)
    n = len(mons)
    out = []
    for i in range(3):
        c = vec[i * n:(i + 1) * n]

        def part(t, s, which, absval, c=c, i=i):
            u, v = t - t0[i], s - s0[i]
            if absval:
                c, u, v = np.abs(c), abs(u), abs(v)
            acc = 0.0
            for ci, (a, b) in zip(c, mons):
                if which == 0 and a:
                    acc += ci * a * u ** (a - 1) * v ** b
                elif which == 1 and b:
                    acc += ci * b * u ** a * v ** (b - 1)
            return acc

        out.append(LeafForm(*(lambda t, s, w=w, ab=ab, f=part: f(t, s, w, ab)
                              for ab in (False, True) for w in (0, 1))))
    return out
