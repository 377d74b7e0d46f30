"""Regenerate golden files: python3 tests/regen_golden.py (review the diff before committing)."""
import json
from pathlib import Path

from legweb.cli import run_suite, web_concurrency_action, web_roots_action
from legweb.deformation import compat_system
from legweb.report import dumps

GOLDEN = Path(__file__).with_name("golden")

WEB_CASES = {
    "web_roots_float": (web_roots_action, {"point": "1,2,6,-11", "field": "float", "seed": 0}),
    "web_roots_rational": (web_roots_action, {"point": "1,2,6,-11", "field": "rational", "seed": 0}),
    "web_concurrency_rational": (web_concurrency_action, {"t": "1,2,3", "field": "rational", "seed": 0}),
}
SUITES = ("structure", "deformation", "maxrank", "cubic")


def main() -> None:
    GOLDEN.mkdir(exist_ok=True)
    (GOLDEN / "compat.json").write_text(json.dumps(compat_system().as_dict(), indent=1, sort_keys=True) + "\n")
    for s in SUITES:
        (GOLDEN / f"verify_{s}.json").write_text(run_suite(s).body_json())
    for name, (fn, cfg) in WEB_CASES.items():
        (GOLDEN / f"{name}.json").write_text(dumps(fn(dict(cfg))[0].body()))


if __name__ == "__main__":
    main()
