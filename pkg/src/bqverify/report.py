"""Residual summaries shared by every check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of one named check: the largest residual against a tolerance.

    ``passed`` is derived from ``max_abs <= tol`` unless given explicitly
    (checks whose verdict is structural, e.g. a rank count, pass it in).
    """

    check: str
    max_abs: float
    tol: float
    passed: bool | None = None
    details: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.max_abs = float(self.max_abs)
        if self.passed is None:
            self.passed = bool(self.max_abs <= self.tol)

    def to_dict(self, with_details: bool = False) -> dict[str, Any]:
        # non-finite residuals (errored checks) serialize as null to keep the JSON standard
        max_abs = self.max_abs if math.isfinite(self.max_abs) else None
        out = {"check": self.check, "max_abs": max_abs, "tol": self.tol, "pass": self.passed}
        out.update(self.extra)
        if with_details:
            out["details"] = self.details
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.check}: max_abs={self.max_abs:.3e} tol={self.tol:.1e}"
