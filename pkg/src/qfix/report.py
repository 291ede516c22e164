"""Check reports shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple
    detail: str = ""


@dataclass
class Report:
    """Outcome of a law check over a finite tested scope.

    An empty violation list means the law held on everything tested, which is
    evidence and not a proof whenever the scope was sampled; ``notes`` records
    such limits.
    """

    name: str
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def fail(self, law: str, *witness: Any, detail: str = "") -> None:
        self.violations.append(Violation(law, tuple(witness), detail))

    def note(self, text: str) -> None:
        if text not in self.notes:
            self.notes.append(text)

    def laws_violated(self) -> set:
        return {v.law for v in self.violations}

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"[{status}] {self.name}"
        if self.violations:
            first = self.violations[0]
            line += f": {len(self.violations)} violation(s), first {first.law} at {first.witness!r}"
            if first.detail:
                line += f" ({first.detail})"
        return line
