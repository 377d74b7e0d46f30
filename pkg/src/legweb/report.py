"""Check records and JSON reports.

The report ``body`` is a pure function of (suite, config, seed); wall-clock
timings live under ``meta`` so the body can be compared byte for byte.
"""
from __future__ import annotations

import json
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1
VERDICTS = ("pass", "fail", "residual-published")


@dataclass
class Check:
    id: str
    tag: str
    verdict: str
    payload: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def ok(self) -> bool:
        return self.verdict != "fail"

    def body(self) -> dict[str, Any]:
        return {"id": self.id, "tag": self.tag, "verdict": self.verdict, "payload": self.payload}


def verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def run_check(fn: Callable[[], Check]) -> Check:
    t0 = time.perf_counter()
    c = fn()
    c.seconds = time.perf_counter() - t0
    return c


@dataclass
class Report:
    suite: str
    config: dict[str, Any]
    seed: int
    checks: list[Check] = field(default_factory=list)

    def add(self, c: Check) -> Check:
        self.checks.append(c)
        return c

    def extend(self, cs) -> None:
        for c in cs:
            self.add(c)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def body(self) -> dict[str, Any]:
        checks = sorted(self.checks, key=lambda c: c.id)
        ids = [c.id for c in checks]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate check ids in report")
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "config": self.config,
            "seed": self.seed,
            "status": "pass" if self.ok else "fail",
            "checks": [c.body() for c in checks],
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "body": self.body(),
            "meta": {"timing": {c.id: round(c.seconds, 6) for c in sorted(self.checks, key=lambda c: c.id)}},
        }

    def body_json(self) -> str:
        return dumps(self.body())

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_text(self) -> str:
        """Human rendering derived from the JSON body."""
        b = self.body()
        lines = [f"suite {b['suite']}  seed {b['seed']}  status {b['status']}"]
        for c in b["checks"]:
            lines.append(f"  [{c['verdict']:>18}] {c['id']}  ({c['tag']})")
        return "\n".join(lines)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"
