"""Check results shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    details: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL


def check(name: str, condition: bool, details: str = "") -> CheckResult:
    return CheckResult(name, PASS if condition else FAIL, details)
