"""Result containers shared by the computational modules and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


@dataclass
class VerificationRecord:
    """Outcome of one checked claim.

    ``slack`` is signed so that the claim holds when ``slack >= -tolerance``:
    for an inequality it is (bigger side - smaller side), for an equality it is
    ``-|difference|``.
    """

    claim_id: str
    slack: float
    tolerance: float
    quantities: dict[str, float] = field(default_factory=dict)
    note: str = ""

    @property
    def passed(self) -> bool:
        return math.isfinite(self.slack) and self.slack >= -self.tolerance

    @classmethod
    def equality(cls, claim_id: str, a: float, b: float, tolerance: float,
                 relative: bool = False, **quantities) -> "VerificationRecord":
        diff = abs(a - b)
        if relative:
            diff /= max(abs(a), abs(b), 1e-300)
        return cls(claim_id, -diff, tolerance, {"lhs": a, "rhs": b, **quantities})

    @classmethod
    def inequality(cls, claim_id: str, small: float, big: float, tolerance: float,
                   **quantities) -> "VerificationRecord":
        """Record for ``small <= big``."""
        return cls(claim_id, big - small, tolerance, {"small": small, "big": big, **quantities})

    @classmethod
    def boolean(cls, claim_id: str, ok: bool, **quantities) -> "VerificationRecord":
        return cls(claim_id, 0.0 if ok else -math.inf, 0.0, dict(quantities))

    def csv_row(self) -> list[Any]:
        return [self.claim_id, f"{self.slack:.6e}", f"{self.tolerance:.1e}", str(self.passed).lower()]


@dataclass
class CapacityReport:
    """A capacity value together with how it was obtained and what was checked."""

    value: float
    provenance: str
    quantities: dict[str, Any] = field(default_factory=dict)
    checks: list[VerificationRecord] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(r.passed for r in self.checks)

    def __float__(self) -> float:
        return float(self.value)
