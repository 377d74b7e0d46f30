"""Command-line driver: ``legweb verify <suite>`` and ``legweb web <action>``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import logging
import math
import sys
from collections.abc import Callable
from fractions import Fraction
from pathlib import Path

import numpy as np

from .report import Check, Report, verdict

log = logging.getLogger("legweb")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITES = ("structure", "deformation", "maxrank", "cubic")
ACTIONS = ("roots", "trace", "rank", "concurrency")
CONFIG_KEYS = {
    "seed": int, "samples": int, "degree": int, "tolerance": float, "radius": float,
    "field": str, "curve": str, "point": str, "t": str, "basis": str, "waive": str,
}


class UsageError(Exception):
    pass


# suites ------------------------------------------------------------------

def _suite_structure() -> list[Check]:
    from .sp2model.checks import shape_checks, structure_checks
    return [*shape_checks(), *structure_checks()]


def _suite_deformation() -> list[Check]:
    from .deformation import deformation_checks
    return deformation_checks()


def _suite_maxrank() -> list[Check]:
    from .sp2model.checks import hyperplane_checks, shape_checks
    return [c for c in shape_checks() if "hyperplane" in c.id] + hyperplane_checks()


def _suite_cubic() -> list[Check]:
    from .sp2model.checks import exceptional_checks, intersect_planes_check, quadric_checks, shape_checks
    shapes = [c for c in shape_checks() if "exceptional" in c.id]
    return [*shapes, *exceptional_checks(), *quadric_checks(), *intersect_planes_check()]


SUITE_FUNCS: dict[str, Callable[[], list[Check]]] = {
    "structure": _suite_structure,
    "deformation": _suite_deformation,
    "maxrank": _suite_maxrank,
    "cubic": _suite_cubic,
}


def run_suite(name: str, seed: int = 0, waive: tuple[str, ...] = ()) -> Report:
    if name not in SUITE_FUNCS:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rep = Report(name, {"waive": list(waive)}, seed)
    for c in SUITE_FUNCS[name]():
        if c.id in waive and c.verdict == "fail":
            c.payload = {**c.payload, "waived": True}
            c.verdict = "residual-published"
        rep.add(c)
    return rep


# parsing helpers -----------------------------------------------------------

def _number(tok: str, field: str):
    tok = tok.strip()
    if field == "rational":
        try:
            return Fraction(tok)
        except ValueError as e:
            raise UsageError(f"not a rational number: {tok!r}") from e
    try:
        return float(tok)
    except ValueError as e:
        raise UsageError(f"not a number: {tok!r}") from e


def parse_vector(text: str, field: str, n: int | None = None) -> list:
    vals = [_number(t, field) for t in text.replace(":", ",").split(",") if t.strip()]
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} comma-separated values, got {len(vals)}")
    return vals


def read_config(path: str) -> dict:
    """Flat ``key = value`` file mirroring the command-line flags."""
    text = Path(path).read_text()
    cp = configparser.ConfigParser()
    try:
        cp.read_string("[legweb]\n" + text)
    except configparser.Error as e:
        raise UsageError(f"bad config file {path}: {e}") from e
    out = {}
    for key, raw in cp["legweb"].items():
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](raw)
        except ValueError as e:
            raise UsageError(f"bad value for {key}: {raw!r}") from e
    return out


def _settings(args) -> dict:
    cfg = read_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg.setdefault("seed", 0)
    cfg.setdefault("field", "float")
    return cfg


# web actions -----------------------------------------------------------------

def _curve(cfg):
    from .numgeom.curves import load_curve
    try:
        return load_curve(cfg.get("curve", "reference"))
    except KeyError as e:
        raise UsageError(f"unknown curve {cfg.get('curve')!r}") from e


def _str(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def projective_text(v) -> str:
    """``a : b : c : d`` with denominators cleared for rational input."""
    if all(isinstance(c, Fraction) for c in v):
        m = math.lcm(*(c.denominator for c in v))
        ints = [int(c * m) for c in v]
        g = math.gcd(*ints) or 1
        lead = next(c for c in ints if c)
        sign = 1 if lead > 0 else -1
        return " : ".join(str(sign * c // g) for c in ints)
    a = np.asarray(v, dtype=float)
    lead = a[np.flatnonzero(np.abs(a) > 1e-12 * np.max(np.abs(a)))[0]]
    return " : ".join(f"{c:.12g}" for c in a / lead)


def web_roots_action(cfg) -> tuple[Report, str]:
    from .numgeom.web import SampleRejected, root_report, web_roots
    curve = _curve(cfg)
    if "point" not in cfg:
        raise UsageError("web roots needs --point")
    x = parse_vector(cfg["point"], cfg["field"], 4)
    rep = Report("web.roots", {k: cfg[k] for k in ("curve", "field", "point") if k in cfg}, cfg["seed"])
    try:
        if cfg["field"] == "rational":
            roots = web_roots(curve, x)
            payload = {"roots": [str(r) for r in roots]}
        else:
            rr = root_report(curve, np.asarray(x))
            roots = rr.roots
            if np.iscomplexobj(roots):
                payload = {"roots": [[float(r.real), float(r.imag)] for r in roots], "complex": True}
            else:
                payload = {"roots": [float(r) for r in roots]}
            payload.update(discriminant=rr.discriminant, newton_step=rr.newton_step, residual=rr.residual)
        rep.add(Check("web.roots", "incidence-roots", "pass", payload))
        text = " ".join(str(r) if isinstance(r, (Fraction, complex)) else f"{r:.12g}" for r in list(roots))
    except SampleRejected as e:
        rep.add(Check("web.roots", "incidence-roots", "fail", {"rejected": str(e)}))
        text = f"sample rejected: {e}"
    return rep, text


def web_concurrency_action(cfg) -> tuple[Report, str]:
    from .numgeom.web import concurrency_point
    curve = _curve(cfg)
    if "t" not in cfg:
        raise UsageError("web concurrency needs --t")
    ts = parse_vector(cfg["t"], cfg["field"], 3)
    pts = [curve.exact(t) if cfg["field"] == "rational" else curve(t) for t in ts]
    c = concurrency_point(pts)
    rep = Report("web.concurrency", {k: cfg[k] for k in ("curve", "field", "t") if k in cfg}, cfg["seed"])
    ok = c.kernel_dim == 1
    payload = {"kernel_dim": c.kernel_dim}
    if ok:
        payload["point"] = [_str(v) for v in c.point]
        payload["homogeneous"] = projective_text(c.point)
    if c.singular_values:
        payload["singular_values"] = c.singular_values
    rep.add(Check("web.concurrency", "concurrency-law", verdict(ok), payload))
    text = payload["homogeneous"] if ok else f"degenerate configuration: kernel dimension {c.kernel_dim}"
    return rep, text


def _rank_config(cfg):
    from .numgeom.rank import RankConfig
    if cfg["field"] != "float":
        raise UsageError("the rank experiment runs in floating point only")
    kw = {k: cfg[k] for k in ("samples", "degree", "tolerance", "radius", "seed", "basis") if k in cfg}
    try:
        return RankConfig(**kw)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _base_point(cfg, curve):
    from .numgeom.checks import BASE_POINT, control_base_point
    if "point" in cfg:
        return [float(v) for v in parse_vector(cfg["point"], "float", 4)]
    return list(map(float, BASE_POINT)) if curve.legendrian else control_base_point(curve)


def web_rank_action(cfg, spectrum: str | None = None, svg: str | None = None,
                    samples_csv: str | None = None) -> tuple[Report, str]:
    from dataclasses import asdict

    from .numgeom.rank import rank_estimate, sample_points
    from .numgeom.web import SampleRejected
    rc = _rank_config(cfg)
    curve = _curve(cfg)
    x0 = _base_point(cfg, curve)
    rep = Report("web.rank", {"curve": curve.name, "point": x0, **asdict(rc)}, rc.seed)
    try:
        r = rank_estimate(curve, x0, rc)
    except SampleRejected as e:
        rep.add(Check("web.rank", "maximum-rank", "fail", {"rejected": str(e)}))
        return rep, f"sample rejected: {e}"
    payload = {**r.summary(), "gap": r.gap}
    # the experiment reports; it only fails when nothing could be sampled
    rep.add(Check("web.rank", "maximum-rank", verdict(r.used > 0), payload))
    if spectrum:
        write_spectrum_csv(spectrum, r.singular_values)
    if svg:
        write_spectrum_svg(svg, r.singular_values, rc.tolerance)
    if samples_csv:
        k, pts = sample_points(curve, x0, rc)
        write_samples_csv(samples_csv, curve, pts)
    gap = "n/a" if r.gap is None else f"{r.gap:.3e}"
    return rep, f"kernel dimension {r.kernel_dim} (gap {gap}, {r.used} samples, {r.dropped} dropped)"


def web_trace_action(cfg) -> tuple[Report, None]:
    from .numgeom.checks import trace_checks
    from .numgeom.rank import rank_estimate
    rc = _rank_config(cfg)
    curve = _curve(cfg)
    x0 = _base_point(cfg, curve)
    from dataclasses import asdict
    rep = Report("web.trace", {"curve": curve.name, "point": x0, **asdict(rc)}, rc.seed)
    r = rank_estimate(curve, x0, rc)
    rep.extend(trace_checks(curve, r, rc, x0))
    return rep, None


# side files ------------------------------------------------------------------

def write_spectrum_csv(path: str, sv) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "sigma", "sigma_over_max"])
        top = sv[0] if sv else 1.0
        for i, s in enumerate(sv):
            w.writerow([i, repr(float(s)), repr(float(s / top)) if top else "0.0"])


def write_samples_csv(path: str, curve, pts) -> None:
    from .numgeom.web import SampleRejected, web_roots
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x0", "x1", "x2", "x3", "t1", "t2", "t3"])
        for x in pts:
            try:
                t = web_roots(curve, x)
            except SampleRejected:
                continue
            w.writerow([repr(float(v)) for v in x] + [repr(float(np.real(v))) for v in t])


def write_spectrum_svg(path: str, sv, tol: float, width: int = 640, height: int = 360) -> None:
    """Static scatter of log10(sigma / sigma_max) against index."""
    top = sv[0] if sv else 1.0
    logs = [math.log10(max(s / top, 1e-18)) for s in sv] if top else []
    lo = min([*logs, math.log10(tol)], default=-1.0) - 0.5
    pad = 40
    n = max(len(logs) - 1, 1)

    def xy(i, v):
        return pad + i * (width - 2 * pad) / n, pad + (v / lo) * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>']
    ty = xy(0, math.log10(tol))[1]
    parts.append(f'<line x1="{pad}" y1="{ty:.2f}" x2="{width - pad}" y2="{ty:.2f}" stroke="red" '
                 'stroke-dasharray="4 3"/>')
    for i, v in enumerate(logs):
        cx, cy = xy(i, v)
        parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2.5" fill="black"/>')
    parts.append(f'<text x="{pad}" y="{pad - 12}" font-size="12">log10 sigma/sigma_max '
                 f'(dashed: tolerance {tol:g})</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


# entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--degree", type=int)
    common.add_argument("--tolerance", type=float)
    common.add_argument("--radius", type=float)
    common.add_argument("--basis", choices=("leaf", "t"))
    common.add_argument("--field", choices=("float", "rational"))
    common.add_argument("--config", help="flat key = value file mirroring the flags")
    common.add_argument("--curve", help="curve name from the bundled curve file")
    common.add_argument("--point", help="homogeneous point, e.g. 1,2,6,-11")
    common.add_argument("--t", help="three curve parameters, e.g. 1,2,3")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="legweb", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a symbolic verification suite")
    v.add_argument("suite", nargs="?", choices=SUITES)
    v.add_argument("--suite", dest="suite_flag", choices=SUITES)
    w = sub.add_parser("web", parents=[common], help="numeric dual-web tools")
    w.add_argument("action", choices=ACTIONS)
    w.add_argument("--spectrum", help="CSV file for the singular spectrum (rank)")
    w.add_argument("--svg", help="SVG scatter of the singular spectrum (rank)")
    w.add_argument("--csv", help="CSV of sample points and their roots (rank)")
    return p


def _emit(rep: Report, text: str | None, args) -> None:
    out = rep.to_json() if args.format == "json" else rep.to_text() + ("\n" + text if text else "") + "\n"
    if args.out:
        Path(args.out).write_text(rep.to_json())
        if text:
            print(text)
    else:
        sys.stdout.write(out)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = _settings(args)
        if cfg["field"] not in ("float", "rational"):
            raise UsageError(f"unknown field {cfg['field']!r}")
        if args.command == "verify":
            suite = args.suite or args.suite_flag
            if suite is None:
                raise UsageError("verify needs a suite: " + ", ".join(SUITES))
            waive = tuple(w.strip() for w in cfg.get("waive", "").split(",") if w.strip())
            rep, text = run_suite(suite, cfg["seed"], waive), None
        elif args.action == "roots":
            rep, text = web_roots_action(cfg)
        elif args.action == "concurrency":
            rep, text = web_concurrency_action(cfg)
        elif args.action == "rank":
            rep, text = web_rank_action(cfg, args.spectrum, args.svg, args.csv)
        else:
            rep, text = web_trace_action(cfg)
    except (UsageError, OSError) as e:
        print(f"legweb: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _emit(rep, text, args)
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
