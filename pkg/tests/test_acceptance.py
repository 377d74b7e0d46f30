"""Acceptance criteria 1-10.

Every criterion runs its computation in a fresh interpreter so that caches
warmed by other tests cannot shorten the measured runtime.  One summary line
per criterion is printed at the end of the session (see conftest.py).
"""
from __future__ import annotations

import json
import subprocess
import sys
import textwrap
from pathlib import Path


ROOT = Path(__file__).resolve().parents[1]
ARCHIVE = ROOT / "archive"
RESULTS: dict[int, str] = {}


def fresh(body: str, timeout: float = 900) -> dict:
    """Run ``body`` (which must set ``checks`` to a list of Check) and return bodies + seconds."""
    code = textwrap.dedent("""
        import json, time
        t0 = time.perf_counter()
        {body}
        seconds = time.perf_counter() - t0
        print(json.dumps({{"checks": {{c.id: c.body() for c in checks}}, "seconds": seconds}}))
    """).format(body=textwrap.dedent(body).strip())
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, timeout=timeout)
    assert res.returncode == 0, res.stderr
    return json.loads(res.stdout.strip().splitlines()[-1])


def record(n: int, ok: bool, seconds: float, limit: float, note: str = "") -> None:
    ok = ok and seconds < limit
    RESULTS[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  ({seconds:.2f} s, limit {limit:g} s){'  ' + note if note else ''}"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def verdicts(r: dict) -> dict[str, str]:
    return {k: v["verdict"] for k, v in r["checks"].items()}


def test_criterion_01_sp2_shape():
    r = fresh("""
        from legweb.sp2model.checks import shape_checks
        checks = shape_checks()
    """)
    v = verdicts(r)
    ok = all(v[k] == "pass" for k in ("shape.normalized", "shape.hyperplane", "shape.exceptional"))
    record(1, ok, r["seconds"], 1.0, "printed exceptional entry: " + v["shape.exceptional-as-printed"])


def test_criterion_02_hyperplane_model():
    r = fresh("""
        from legweb.sp2model.checks import hyperplane_checks
        checks = hyperplane_checks()
    """)
    v = verdicts(r)
    ok = v["hyperplane.mc-defect"] == "pass" and v["hyperplane.web-coframe"] == "pass"
    record(2, ok and all(x == "pass" for x in v.values()), r["seconds"], 5.0)


def test_criterion_03_structure_equations():
    r = fresh("""
        from legweb.sp2model.checks import structure_checks
        checks = structure_checks()
    """)
    v = verdicts(r)
    need = ("structure.mc-defect", "structure.dd-B0", "structure.residual-without-exception")
    record(3, all(v[k] == "pass" for k in need) and all(x != "fail" for x in v.values()), r["seconds"], 60.0)


def test_criterion_04_deformation_closure():
    r = fresh("""
        from legweb.deformation import closure_checks
        checks = closure_checks()
    """)
    v = verdicts(r)
    need = ("closure.prop", "closure.trivial", "closure.idempotent")
    record(4, all(v[k] == "pass" for k in need) and all(x == "pass" for x in v.values()), r["seconds"], 120.0)


def test_criterion_05_compatibility_polynomials():
    r = fresh("""
        from legweb.deformation import bounds_check, compat_checks
        checks = [*compat_checks(), bounds_check()]
    """)
    v = verdicts(r)
    degrees = {k: r["checks"][f"compat.{k}"]["payload"]["degree"] for k in ("Eq1", "Eq3", "Eq0", "Eq9")}
    ok = (all(x == "pass" for x in v.values()) and degrees == {"Eq1": 4, "Eq3": 4, "Eq0": 5, "Eq9": 4}
          and r["checks"]["bounds"]["payload"]["bounds"] == [81, 65])
    record(5, ok, r["seconds"], 600.0, f"degrees {degrees}")


def test_criterion_06_flat_rigidity():
    r = fresh("""
        from legweb.deformation import flat_checks, rigidity_check
        checks = [*flat_checks(), rigidity_check()]
    """)
    v = verdicts(r)
    pts = r["checks"]["flat.solve"]["payload"]["points"]
    ok = (v["flat.reduce"] == "pass" and v["flat.solve"] == "pass" and pts == [["0", "0", "0"]]
          and v["rigidity.vanishing-orders"] == "pass")
    record(6, ok and all(x != "fail" for x in v.values()), r["seconds"], 60.0)


def test_criterion_07_exceptional_model():
    r = fresh("""
        from legweb.sp2model.checks import exceptional_checks, intersect_planes_check, quadric_checks
        checks = [*exceptional_checks(), *quadric_checks(), *intersect_planes_check()]
    """)
    v = verdicts(r)
    vanish = [k for k in v if k.startswith("quadrics.vanish.")]
    legendrian = [k for k in v if k.startswith("quadrics.legendrian.p")]
    ok = (v["exceptional.mc-defect"] == "pass" and v["exceptional.da0"] == "pass"
          and len(vanish) == 9 and all(v[k] == "pass" for k in vanish)
          and len(legendrian) == 3 and all(v[k] == "pass" for k in legendrian)
          and v["planes.kernel"] == "pass" and all(x != "fail" for x in v.values()))
    cov = ",".join(v[k] for k in sorted(v) if k.startswith("quadrics.covariant"))
    record(7, ok, r["seconds"], 60.0, f"covariant constancy: {cov}")


def test_criterion_08_numeric_web():
    r = fresh("""
        from legweb.numgeom.checks import web_checks
        checks = web_checks(0)
    """)
    v = verdicts(r)
    c = r["checks"]
    ok = (v["web.roots.base"] == "pass" and c["web.roots.base"]["payload"]["error"] < 1e-10
          and v["web.roundtrip"] == "pass" and c["web.roundtrip"]["payload"]["samples"] == 100
          and c["web.roundtrip"]["payload"]["max_projective_error"] < 1e-9
          and c["web.first-integral.leaf"]["payload"]["max_deviation"] < 1e-9
          and v["web.roots.base-rational"] == "pass" and v["web.concurrency.base"] == "pass"
          and all(x == "pass" for x in v.values()))
    record(8, ok, r["seconds"], 10.0,
           f"roundtrip {c['web.roundtrip']['payload']['max_projective_error']:.1e}")


def test_criterion_09_rank_experiment():
    r = fresh("""
        from legweb.numgeom.checks import rank_checks
        checks = rank_checks()
    """)
    c = r["checks"]
    ref, ctl = c["rank.reference"]["payload"], c["rank.control"]["payload"]
    ARCHIVE.mkdir(exist_ok=True)
    for name in ("rank.reference", "rank.control", "rank.t-only-basis", "rank.degree-ladder"):
        (ARCHIVE / f"{name}.json").write_text(json.dumps(c[name], indent=1, sort_keys=True) + "\n")
    ok = (ref["kernel_dim"] == 3 and ref["gap"] is not None and ref["gap"] >= 1e3
          and ref["config"]["degree"] == 6 and ref["used"] >= 500
          and len(ref["singular_values"]) == 3 * 27
          and c["rank.trace.collocation"]["verdict"] == "pass")
    record(9, ok, r["seconds"], 60.0,
           f"kernel {ref['kernel_dim']}, gap {ref['gap']:.2e}; control kernel {ctl['kernel_dim']}")


SUITE_RUNS = {
    "structure": ["verify", "structure"],
    "deformation": ["verify", "deformation"],
    "maxrank": ["verify", "maxrank"],
    "cubic": ["verify", "cubic"],
    "web-roots": ["web", "roots", "--point", "1,2,6,-11"],
    "web-concurrency": ["web", "concurrency", "--t", "1,2,3", "--field", "rational"],
    "web-rank": ["web", "rank", "--samples", "500", "--degree", "6", "--seed", "7"],
    "web-trace": ["web", "trace", "--samples", "200", "--degree", "4", "--seed", "7"],
}


def _body_bytes(args: list[str], tmp: Path) -> bytes:
    out = tmp / "r.json"
    res = subprocess.run([sys.executable, "-m", "legweb.cli", *args, "--out", str(out)],
                         capture_output=True, text=True, timeout=600)
    assert res.returncode == 0, res.stderr
    doc = json.loads(out.read_text())
    return json.dumps(doc["body"], indent=2, sort_keys=True).encode()


def test_criterion_10_determinism(tmp_path):
    import time
    t0 = time.perf_counter()
    differing = []
    for name, args in SUITE_RUNS.items():
        a = _body_bytes(args, tmp_path)
        b = _body_bytes(args, tmp_path)
        if a != b:
            differing.append(name)
    record(10, not differing, time.perf_counter() - t0, 600.0,
           f"{len(SUITE_RUNS)} suites twice" + (f"; differing: {differing}" if differing else ""))
