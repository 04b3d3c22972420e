"""Check records shared by every theorem check in the engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def fmt(q) -> str:
    """Render a rational as ``num/den`` (integers without the denominator)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass
class Check:
    name: str
    passed: bool
    anchor: str = ""
    values: dict[str, str] = field(default_factory=dict)
    witness: str | None = None
    flagged: bool = False

    @property
    def status(self) -> str:
        if not self.passed:
            return "fail"
        return "flagged" if self.flagged else "pass"


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name, passed, *, anchor="", values=None, witness=None, flagged=False) -> Check:
        check = Check(name, bool(passed), anchor, dict(values or {}), witness, flagged)
        self.checks.append(check)
        return check

    def extend(self, other: Report) -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def flagged(self) -> bool:
        return any(c.flagged for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def verdict(self) -> str:
        if not self.passed:
            return "fail"
        return "flagged" if self.flagged else "pass"

    def __bool__(self) -> bool:
        return self.passed
