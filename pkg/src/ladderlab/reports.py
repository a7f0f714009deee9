"""Pass/fail record shared by the theorem and functional checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError


@dataclass(frozen=True)
class TheoremReport:
    """One verified identity: |lhs - rhs| (or a stated residual) against an envelope."""

    theorem_id: str
    lhs: float
    rhs: float
    residual: float
    expected_envelope: float
    passed: bool
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.expected_envelope > 0:
            raise DomainError("envelope must be positive")
        if self.passed and not self.residual <= self.expected_envelope:
            raise DomainError("pass flag inconsistent with residual and envelope")

    def as_dict(self) -> dict:
        out = {
            "theorem_id": self.theorem_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "envelope": self.expected_envelope,
            "pass": self.passed,
        }
        out.update(self.details)
        return out


def make_report(theorem_id: str, lhs: float, rhs: float, residual: float, envelope: float,
                extra_ok: bool = True, **details) -> TheoremReport:
    """Build a report whose pass flag is residual <= envelope (and ``extra_ok``)."""
    residual = float(residual)
    ok = bool(extra_ok) and math.isfinite(residual) and residual <= envelope
    return TheoremReport(theorem_id, float(lhs), float(rhs), residual, float(envelope), ok, details)
