"""Structured pass/fail ledgers with counterexample witnesses."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .linear import Fp, Matrix

PASS, FAIL, SKIP = "pass", "fail", "skip"


def serialize_witness(w):
    if w is None:
        return None
    if isinstance(w, Matrix):
        return w.to_strings()
    if isinstance(w, (Fraction, Fp)):
        return str(w)
    if isinstance(w, dict):
        return {str(k): serialize_witness(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [serialize_witness(x) for x in w]
    if isinstance(w, (int, str, bool, float)):
        return w
    return str(w)


@dataclass
class Check:
    name: str
    status: str
    witness: object = None
    anchor: str = ""

    def to_json(self):
        d = {"name": self.name, "status": self.status, "anchor": self.anchor}
        if self.witness is not None:
            d["witness"] = serialize_witness(self.witness)
        return d


@dataclass
class Report:
    title: str
    scope: str = "presented scale"
    entries: list[Check] = field(default_factory=list)

    def check(self, name, ok, witness=None, anchor=""):
        """Record a check; the witness is only kept on failure."""
        self.entries.append(Check(name, PASS if ok else FAIL, None if ok else witness, anchor))
        return ok

    def fail(self, name, witness=None, anchor=""):
        return self.check(name, False, witness, anchor)

    def skip(self, name, reason="", anchor=""):
        self.entries.append(Check(name, SKIP, reason or None, anchor))

    def extend(self, other: "Report", prefix: str = ""):
        for e in other.entries:
            self.entries.append(Check(prefix + e.name, e.status, e.witness, e.anchor))
        return self

    @property
    def passed(self) -> bool:
        return all(e.status != FAIL for e in self.entries)

    @property
    def failures(self) -> list[Check]:
        return [e for e in self.entries if e.status == FAIL]

    def failed(self, prefix: str) -> bool:
        return any(e.status == FAIL and e.name.startswith(prefix) for e in self.entries)

    def status_of(self, name: str) -> str | None:
        for e in self.entries:
            if e.name == name:
                return e.status
        return None

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {
            "title": self.title,
            "scope": self.scope,
            "passed": self.passed,
            "entries": [e.to_json() for e in self.entries],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = ["%s (%s): %s" % (self.title, self.scope, "PASS" if self.passed else "FAIL")]
        for e in self.entries:
            line = "  [%s] %s" % (e.status, e.name)
            if e.witness is not None and e.status != PASS:
                line += "  witness=%s" % json.dumps(serialize_witness(e.witness))
            lines.append(line)
        return "\n".join(lines)

    def __str__(self):
        return self.to_text()
