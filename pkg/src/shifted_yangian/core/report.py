"""Report values returned by verification routines.

Verifications never raise on a failed identity; they collect violations in
a ``CheckReport`` and the caller decides what a failure means.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class CheckReport:
    """Outcome of a family of exact identity checks."""

    name: str
    hint: str = "Increase the depth or inspect the listed violations."
    checks: int = 0
    failures: int = 0
    violations: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    max_violations: int = 50

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, message: str) -> bool:
        """Count one check and keep its message if it failed."""
        self.checks += 1
        if not ok:
            self.failures += 1
            self._keep([message])
        return ok

    def _keep(self, messages: List[str]) -> None:
        room = max(self.max_violations - len(self.violations), 0)
        self.violations.extend(messages[:room])
        if len(messages) > room:
            self.details["truncated_violations"] = True

    def merge(self, other: "CheckReport", prefix: Optional[str] = None) -> "CheckReport":
        """Fold another report in; its messages are prefixed and the cap still applies."""
        self.checks += other.checks
        self.failures += other.failures
        label = prefix or other.name
        self._keep([f"{label}: {v}" for v in other.violations])
        if other.details.get("truncated_violations"):
            self.details["truncated_violations"] = True
        return self

    def log_summary(self, logger: logging.Logger) -> None:
        if self.passed:
            logger.info(f"✅ {self.name}: {self.checks:,} checks passed")
            return
        first = self.violations[0] if self.violations else "none kept"
        logger.error(
            f"❌ {self.name}: {self.failures:,} of {self.checks:,} checks failed "
            f"(first: {first})\n"
            f"   💡 {self.hint}"
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures,
            "violations": list(self.violations),
            "details": dict(self.details),
        }
