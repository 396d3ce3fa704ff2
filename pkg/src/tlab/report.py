"""Machine-readable verification reports.

A report is deterministic given (suite, group, seed, bounds) apart from the
per-check timing fields; witnesses are sanitized to JSON-stable values and
checks are ordered by check id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .mackey import CheckReport

SCHEMA_VERSION = 1


@dataclass
class VerificationReport:
    suite: str
    group: str
    seed: int
    config: dict
    sections: list = field(default_factory=list)  # list of CheckReport

    def extend(self, check_report: CheckReport):
        self.sections.append(check_report)

    @property
    def records(self):
        out = []
        for section in self.sections:
            for r in section.records:
                out.append((section.name, r))
        return out

    @property
    def counts(self):
        c = {"pass": 0, "fail": 0, "undecided": 0}
        for _, r in self.records:
            c[r.status] += 1
        return c

    def status(self, lenient: bool = False) -> str:
        c = self.counts
        if c["fail"]:
            return "fail"
        if c["undecided"]:
            return "warn" if lenient else "fail"
        return "pass"

    def to_payload(self, lenient: bool = False) -> dict:
        checks = []
        for section, r in self.records:
            checks.append({
                "id": f"{section}/{r.check_id}",
                "law": r.law,
                "status": r.status,
                "witness": _json_safe(r.witness),
                "ms": round(r.ms, 3),
            })
        checks.sort(key=lambda c: c["id"])
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "group": self.group,
            "seed": self.seed,
            "config": _json_safe(self.config),
            "counts": self.counts,
            "status": self.status(lenient),
            "checks": checks,
        }

    def to_json(self, lenient: bool = False) -> str:
        return json.dumps(self.to_payload(lenient), sort_keys=True, indent=2)

    def summary_lines(self) -> list[str]:
        lines = []
        for section in self.sections:
            c = {"pass": 0, "fail": 0, "undecided": 0}
            for r in section.records:
                c[r.status] += 1
            flag = "ok" if not c["fail"] and not c["undecided"] else "FAIL"
            lines.append(
                f"{flag:4} {section.name}: {c['pass']} pass"
                + (f", {c['fail']} fail" if c["fail"] else "")
                + (f", {c['undecided']} undecided" if c["undecided"] else "")
            )
        return lines


def _json_safe(value):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return repr(value)
