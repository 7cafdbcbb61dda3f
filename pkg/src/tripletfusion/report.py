"""Structured results of the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """One named check.

    Observations are recorded facts that do not decide ``Report.ok``.
    """

    name: str
    passed: bool
    detail: str = ""
    observation: bool = False

    def line(self) -> str:
        if self.observation:
            tag = "NOTE"
        else:
            tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}" + (f": {self.detail}" if self.detail else "")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "observation": self.observation,
        }


@dataclass(frozen=True)
class Report:
    title: str
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if not c.observation)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.observation and not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        return [f"== {self.title}"] + [c.line() for c in self.checks]

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


class ReportBuilder:
    def __init__(self, title: str):
        self.title = title
        self._checks: list[Check] = []

    def add(self, name: str, passed: bool, detail: str = "", observation: bool = False) -> Check:
        check = Check(name, bool(passed), detail, observation)
        self._checks.append(check)
        return check

    def build(self) -> Report:
        return Report(self.title, tuple(self._checks))
