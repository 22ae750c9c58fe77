from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of one verification routine.

    ``failures`` holds one JSON-ready dict per violation; ``info`` carries
    anything else worth recording (assumptions, pinned twists, counts).
    """

    check: str
    passed: bool
    n_checked: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "passed": self.passed,
            "n_checked": self.n_checked,
            "failures": self.failures,
            "info": self.info,
        }
