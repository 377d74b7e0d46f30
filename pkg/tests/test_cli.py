import json
import subprocess
import sys
from pathlib import Path

import pytest

from legweb.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, projective_text, read_config, UsageError
from legweb.report import Check, Report

GOLDEN = Path(__file__).with_name("golden")


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("suite", ["structure", "deformation", "maxrank", "cubic"])
def test_verify_matches_golden(suite, tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["verify", suite, "--out", str(out)], capsys)
    assert code == EXIT_OK
    body = json.loads(out.read_text())["body"]
    assert body == json.loads((GOLDEN / f"verify_{suite}.json").read_text())


def test_suite_flag_form(capsys):
    code, out, _ = run(["verify", "--suite", "maxrank"], capsys)
    assert code == EXIT_OK and json.loads(out)["body"]["suite"] == "maxrank"


def test_structure_report_has_exception_relation(capsys):
    _, out, _ = run(["verify", "structure"], capsys)
    ids = [c["id"] for c in json.loads(out)["body"]["checks"]]
    assert "structure.dd-B0" in ids and "structure.residual-without-exception" in ids


def test_deformation_report_has_flat_root(capsys):
    _, out, _ = run(["verify", "deformation"], capsys)
    rec = {c["id"]: c for c in json.loads(out)["body"]["checks"]}["flat.solve"]
    assert rec["verdict"] == "pass" and rec["payload"]["points"] == [["0", "0", "0"]]


def test_cubic_has_nine_vanishing_records(capsys):
    _, out, _ = run(["verify", "cubic"], capsys)
    recs = [c for c in json.loads(out)["body"]["checks"] if c["id"].startswith("quadrics.vanish.")]
    assert len(recs) == 9 and all(c["verdict"] == "pass" for c in recs)


@pytest.mark.parametrize("name,args", [
    ("web_roots_float", ["web", "roots", "--point", "1,2,6,-11"]),
    ("web_roots_rational", ["web", "roots", "--point", "1,2,6,-11", "--field", "rational"]),
    ("web_concurrency_rational", ["web", "concurrency", "--t", "1,2,3", "--field", "rational"]),
])
def test_web_matches_golden(name, args, capsys):
    code, out, _ = run(args, capsys)
    assert code == EXIT_OK
    assert json.loads(out)["body"] == json.loads((GOLDEN / f"{name}.json").read_text())


def test_text_outputs(capsys):
    _, out, _ = run(["web", "roots", "--point", "1,2,6,-11", "--format", "text"], capsys)
    assert out.strip().splitlines()[-1] == "1 2 3"
    _, out, _ = run(["web", "concurrency", "--t", "1,2,3", "--format", "text"], capsys)
    assert out.strip().splitlines()[-1] == "1 : 2 : 6 : -11"


@pytest.mark.parametrize("args", [
    ["verify", "nonsense"],
    ["verify"],
    ["web", "roots"],
    ["web", "roots", "--point", "1,2,3"],
    ["web", "roots", "--point", "1,2,x,4"],
    ["web", "rank", "--field", "rational"],
    ["web", "rank", "--curve", "nope"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(args, capsys):
    try:
        code = main(args)
    except SystemExit as e:
        code = e.code
    assert code == EXIT_USAGE


def test_singular_sample_exits_nonzero(capsys):
    code, out, _ = run(["web", "roots", "--point", "0,0,0,1", "--format", "text"], capsys)
    assert code == EXIT_FAIL and "rejected" in out
    code, _, _ = run(["web", "concurrency", "--t", "1,1,3", "--field", "rational"], capsys)
    assert code == EXIT_FAIL


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("samples = 80\ndegree = 3\nseed = 4\n")
    code, out, _ = run(["web", "rank", "--config", str(cfg)], capsys)
    body = json.loads(out)["body"]
    assert code == EXIT_OK and body["config"]["samples"] == 80 and body["seed"] == 4
    assert body["checks"][0]["payload"]["kernel_dim"] == 3
    # flags override the file
    code, out, _ = run(["web", "rank", "--config", str(cfg), "--degree", "1"], capsys)
    assert json.loads(out)["body"]["checks"][0]["payload"]["kernel_dim"] == 1


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["verify", "maxrank", "--config", str(cfg)]) == EXIT_USAGE
    cfg.write_text("samples = many\n")
    with pytest.raises(UsageError):
        read_config(str(cfg))


def test_waiver_turns_fail_into_published(monkeypatch, capsys):
    import legweb.cli as cli
    monkeypatch.setitem(cli.SUITE_FUNCS, "maxrank", lambda: [Check("x.broken", "t", "fail")])
    assert main(["verify", "maxrank"]) == EXIT_FAIL
    capsys.readouterr()
    monkeypatch.setattr(cli, "read_config", lambda path: {"waive": "x.broken"})
    assert main(["verify", "maxrank", "--config", "ignored"]) == EXIT_OK


def test_rank_side_files(tmp_path, capsys):
    spec, svg, samples = tmp_path / "s.csv", tmp_path / "s.svg", tmp_path / "x.csv"
    code, out, _ = run(["web", "rank", "--samples", "60", "--degree", "3", "--spectrum", str(spec),
                        "--svg", str(svg), "--csv", str(samples), "--format", "text"], capsys)
    assert code == EXIT_OK and "kernel dimension 3" in out
    rows = spec.read_text().splitlines()
    assert rows[0] == "index,sigma,sigma_over_max" and len(rows) == 1 + 3 * 9
    assert svg.read_text().startswith("<svg")
    assert samples.read_text().splitlines()[0] == "x0,x1,x2,x3,t1,t2,t3"


def test_trace_action(capsys):
    code, out, _ = run(["web", "trace", "--samples", "120", "--degree", "3"], capsys)
    assert code == EXIT_OK
    assert {c["id"] for c in json.loads(out)["body"]["checks"]} >= {"rank.trace.collocation", "rank.trace.zero"}


def test_projective_text():
    from fractions import Fraction as F
    assert projective_text((F(-1, 11), F(-2, 11), F(-6, 11), F(1))) == "1 : 2 : 6 : -11"


def test_report_rejects_duplicate_ids():
    r = Report("s", {}, 0, [Check("a", "t", "pass"), Check("a", "t", "pass")])
    with pytest.raises(ValueError):
        r.body()


def test_console_entry_point_runs():
    res = subprocess.run([sys.executable, "-m", "legweb.cli", "web", "roots", "--point", "1,2,6,-11",
                          "--field", "rational", "--format", "text"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip().endswith("1 2 3")
