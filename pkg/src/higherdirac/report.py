"""Verdict reports shared by every check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Clause:
    name: str
    passed: bool
    detail: Any = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    """Outcome of a check, clause by clause.

    ``verdict`` is normally ``"pass"`` or ``"fail"``; some checks use extra
    verdicts such as ``"weak-lagrangian"`` or ``"precondition"``.
    """

    check: str
    clauses: list[Clause] = field(default_factory=list)
    verdict: str | None = None
    data: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: Any = None) -> Clause:
        clause = Clause(name, bool(passed), detail)
        self.clauses.append(clause)
        return clause

    @property
    def passed(self) -> bool:
        if self.verdict is not None:
            return self.verdict == "pass"
        return all(c.passed for c in self.clauses)

    def __bool__(self) -> bool:
        return self.passed

    def failing(self) -> list[str]:
        return [c.name for c in self.clauses if not c.passed]

    def clause(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def final(self) -> str:
        return self.verdict or ("pass" if self.passed else "fail")

    def to_dict(self) -> dict:
        return {"check": self.check, "verdict": self.final(),
                "clauses": [c.to_dict() for c in self.clauses],
                **({"data": self.data} if self.data else {})}

    def render(self) -> str:
        lines = [f"{self.check}: {self.final().upper()}"]
        for c in self.clauses:
            mark = "ok " if c.passed else "BAD"
            line = f"  [{mark}] {c.name}"
            if c.detail is not None and not c.passed:
                line += f": {c.detail}"
            lines.append(line)
        return "\n".join(lines)
