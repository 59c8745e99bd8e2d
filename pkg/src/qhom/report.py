"""Verification reports shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    condition: str
    location: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"condition": self.condition, "location": self.location, "detail": self.detail}


@dataclass
class Report:
    """Outcome of a verifier: ``passed`` plus the list of violations found."""

    violations: list[Violation] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def add(self, condition: str, location, detail: str = "") -> None:
        self.violations.append(Violation(condition, str(location), detail))

    def extend(self, other: "Report", prefix: str = "") -> None:
        for v in other.violations:
            self.violations.append(Violation(prefix + v.condition, v.location, v.detail))

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def failed(self, condition: str) -> bool:
        return condition in self.conditions()

    def to_dict(self) -> dict:
        out = {"pass": self.passed, "violations": [v.to_dict() for v in self.violations]}
        if self.notes:
            out["notes"] = self.notes
        return out

    def summary(self) -> str:
        if self.passed:
            lines = ["PASS"]
        else:
            lines = [f"FAIL ({len(self.violations)} violation(s))"]
            for v in self.violations[:20]:
                tail = f": {v.detail}" if v.detail else ""
                lines.append(f"  [{v.condition}] {v.location}{tail}")
            if len(self.violations) > 20:
                lines.append(f"  ... {len(self.violations) - 20} more")
        for k, v in self.notes.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


class PreconditionError(ValueError):
    """Input violates the documented precondition of an operation."""
