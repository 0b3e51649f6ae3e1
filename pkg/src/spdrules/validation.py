"""Validation findings shared by both rule representations."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


@dataclass
class ValidationReport:
    """What was checked, what failed, and what merely looks suspicious.

    ``anonymity_failures`` lists type-anonymity conditions that a rule in
    the general (identity-aware) form does not meet; they only count as
    violations when the rule claims to be type-anonymous.
    """

    checked: list[str] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)
    anonymity_failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def check(self, code: str) -> None:
        if code not in self.checked:
            self.checked.append(code)

    def fail(self, code: str, message: str) -> None:
        self.check(code)
        self.violations.append(Violation(code, message))

    def warn(self, code: str, message: str) -> None:
        self.warnings.append(Violation(code, message))

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checked": list(self.checked),
            "violations": [v.as_dict() for v in self.violations],
            "warnings": [w.as_dict() for w in self.warnings],
            "anonymity_failures": list(self.anonymity_failures),
        }
