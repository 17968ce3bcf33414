"""Verification reports shared by every checking routine."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA_ID = "chainlab/1"

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass
class CheckEntry:
    name: str
    status: str
    anchor: str
    residual: str = "0"
    family: str = ""
    order: int = 0
    detail: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"bad status {self.status!r}")
        if not self.anchor:
            raise ValueError("every check needs an anchor")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> Dict[str, Any]:
        d = {"name": self.name, "status": self.status, "anchor": self.anchor,
             "residual": self.residual, "family": self.family, "order": self.order}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Erratum:
    subject: str
    published: str
    derived: str
    note: str = ""

    def to_dict(self) -> Dict[str, str]:
        return {"subject": self.subject, "published": self.published,
                "derived": self.derived, "note": self.note}


@dataclass
class VerificationReport:
    subject: str
    entries: List[CheckEntry] = field(default_factory=list)
    errata: List[Erratum] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        if any(e.status == FAIL for e in self.entries):
            return FAIL
        if any(e.status == INCONCLUSIVE for e in self.entries):
            return INCONCLUSIVE
        return PASS

    @property
    def passed(self) -> bool:
        return bool(self.entries) and self.status == PASS

    def add(self, entry: CheckEntry) -> CheckEntry:
        self.entries.append(entry)
        return entry

    def extend(self, other: "VerificationReport") -> None:
        self.entries.extend(other.entries)
        for e in other.errata:
            if e not in self.errata:
                self.errata.append(e)
        self.data.update(other.data)

    def entry(self, name: str) -> Optional[CheckEntry]:
        for e in self.entries:
            if e.name == name:
                return e
        return None

    def sorted(self) -> "VerificationReport":
        entries = sorted(self.entries, key=lambda e: (e.family, e.order, e.name))
        return VerificationReport(self.subject, entries, list(self.errata), dict(self.data))

    def to_dict(self, command: str = "") -> Dict[str, Any]:
        out = {
            "schema": SCHEMA_ID,
            "command": command,
            "subject": self.subject,
            "entries": [e.to_dict() for e in self.entries],
            "errata": [e.to_dict() for e in self.errata],
            "status": self.status,
        }
        if self.data:
            out["data"] = self.data
        return out

    def to_json(self, command: str = "") -> str:
        return json.dumps(self.to_dict(command), indent=2)

    def to_text(self) -> str:
        lines = [f"{self.subject}: {self.status.upper()}"]
        width = max((len(e.name) for e in self.entries), default=0)
        for e in self.entries:
            res = "" if e.residual in ("", "0") else f"  residual={e.residual}"
            lines.append(f"  [{e.status:>12}] {e.name:<{width}}  ({e.anchor}){res}")
        for er in self.errata:
            lines.append(f"  erratum: {er.subject}: published {er.published}; derived {er.derived}"
                         + (f" ({er.note})" if er.note else ""))
        return "\n".join(lines)


def load_schema() -> Dict[str, Any]:
    from importlib import resources
    text = resources.files("chainlab").joinpath("report.schema.json").read_text()
    return json.loads(text)
