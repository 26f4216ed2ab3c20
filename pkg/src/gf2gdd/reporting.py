"""Check and report containers shared by the verifier and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
SKIP = "skipped"


@dataclass
class Check:
    """One verified statement.  Failed checks always carry a witness."""

    name: str
    status: str
    observed: Any = None
    expected: Any = None
    witness: Any = None

    def as_dict(self) -> dict:
        d = {"name": self.name, "status": self.status}
        if self.observed is not None:
            d["observed"] = self.observed
        if self.expected is not None:
            d["expected"] = self.expected
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class VerificationReport:
    title: str
    checks: list[Check] = field(default_factory=list)
    lambda_observed: int | None = None
    pairs_tested: int = 0
    conjectured: bool = False
    notes: list[str] = field(default_factory=list)

    def record(self, name: str, observed: Any, expected: Any, witness: Any = None) -> bool:
        ok = observed == expected
        if ok:
            self.checks.append(Check(name, PASS, observed, expected))
        else:
            self.checks.append(Check(name, FAIL, observed, expected,
                                     witness if witness is not None else
                                     {"observed": observed, "expected": expected}))
        return ok

    def skip(self, name: str, reason: str) -> None:
        self.checks.append(Check(name, SKIP, witness=reason))

    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def merge(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)
        self.pairs_tested += other.pairs_tested
        self.conjectured = self.conjectured or other.conjectured
        for note in other.notes:
            if note not in self.notes:
                self.notes.append(note)
        if self.lambda_observed is None:
            self.lambda_observed = other.lambda_observed

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.ok(),
            "lambda_observed": self.lambda_observed,
            "pairs_tested": self.pairs_tested,
            "conjectured": self.conjectured,
            "notes": list(self.notes),
            "checks": [c.as_dict() for c in self.checks],
        }
