"""Structured verdicts returned by every checker."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
ERROR = "error"


@dataclass(frozen=True)
class Residual:
    """A nonzero residual, printed canonically, and the inputs that produced it."""
    witness: str
    value: str


@dataclass
class ClauseResult:
    name: str
    status: str
    residuals: List[Residual] = field(default_factory=list)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass
class CheckReport:
    """Ordered clause list for one check on one subject."""
    check: str
    subject: str = ""
    clauses: List[ClauseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    @property
    def status(self) -> str:
        if any(c.status == ERROR for c in self.clauses):
            return ERROR
        return PASS if self.passed else FAIL

    def add_clause(self, name: str, residuals: Optional[List[Residual]] = None,
                   detail: str = "", status: Optional[str] = None) -> ClauseResult:
        residuals = list(residuals or [])
        if status is None:
            status = FAIL if residuals else PASS
        clause = ClauseResult(name, status, residuals, detail)
        self.clauses.append(clause)
        if status != PASS:
            logger.info("%s[%s]: clause %s %s (%d residuals)",
                        self.check, self.subject, name, status, len(residuals))
        return clause

    def extend(self, other: "CheckReport", prefix: str = "") -> "CheckReport":
        for clause in other.clauses:
            self.clauses.append(ClauseResult(
                f"{prefix}{clause.name}", clause.status, list(clause.residuals), clause.detail,
            ))
        return self

    def clause(self, name: str) -> ClauseResult:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(f"No clause named {name!r} in {self.check}")

    def failures(self) -> List[ClauseResult]:
        return [c for c in self.clauses if not c.passed]

    def get_summary(self) -> Dict[str, Any]:
        return {
            'check': self.check,
            'subject': self.subject,
            'status': self.status,
            'clauses': len(self.clauses),
            'failed': [c.name for c in self.failures()],
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            'check': self.check,
            'subject': self.subject,
            'status': self.status,
            'clauses': [
                {
                    'name': c.name,
                    'status': c.status,
                    'detail': c.detail,
                    'residuals': [{'witness': r.witness, 'value': r.value} for r in c.residuals],
                }
                for c in self.clauses
            ],
        }
