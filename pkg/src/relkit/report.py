"""Check/report records shared by every suite and by the CLI."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable


def jsonable(value: Any) -> Any:
    """Best-effort conversion of witnesses into JSON-friendly data."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (frozenset, set)):
        return sorted((jsonable(v) for v in value), key=repr)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    to_json = getattr(value, "to_json", None)
    if callable(to_json):
        return to_json()
    return repr(value)


@dataclass
class Check:
    law: str
    anchor: str
    passed: bool
    witness: Any = None
    cases: int = 0

    def to_json(self) -> dict:
        out = {"law": self.law, "anchor": self.anchor, "passed": self.passed, "cases": self.cases}
        if not self.passed:
            out["witness"] = jsonable(self.witness)
        return out


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)
    elapsed: float | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def add(self, law: str, anchor: str, passed: bool, witness: Any = None, cases: int = 0) -> Check:
        check = Check(law, anchor, bool(passed), witness, cases)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.law, c.anchor, c.passed, c.witness, c.cases))
        self.info.update(other.info)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
            "info": jsonable(self.info),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def text(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            line = f"  [{mark}] {c.law} ({c.anchor}; {c.cases} cases)"
            if not c.passed:
                line += f" witness={jsonable(c.witness)!r}"
            lines.append(line)
        for key, value in sorted(self.info.items()):
            lines.append(f"  {key}: {jsonable(value)}")
        if self.elapsed is not None:
            lines.append(f"  elapsed: {self.elapsed:.2f}s")
        return "\n".join(lines)


def merge(suite: str, reports: Iterable[Report]) -> Report:
    out = Report(suite)
    for r in reports:
        out.extend(r, prefix=f"{r.suite}/")
    return out
