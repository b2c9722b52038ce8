"""Check reports."""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np


@dataclass
class CheckReport:
    name: str
    max_abs_residual: float
    tolerance: float
    samples: int
    details: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        # NaN residuals fail
        return bool(self.max_abs_residual <= self.tolerance)

    @classmethod
    def of(
        cls,
        name: str,
        residuals: Iterable[float | np.ndarray],
        tolerance: float,
        details: dict[str, float] | None = None,
    ) -> "CheckReport":
        """Report over one residual (scalar or array) per sample."""
        parts = [np.ravel(np.asarray(a, dtype=float)) for a in residuals]
        r = np.abs(np.concatenate(parts)) if parts else np.zeros(0)
        worst = float(np.max(r)) if r.size else 0.0
        if np.any(np.isnan(r)):
            worst = float("nan")
        return cls(name, worst, tolerance, len(parts), details or {})

    def as_dict(self) -> dict[str, object]:
        return {
            "name": self.name,
            "max_abs_residual": self.max_abs_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "samples": self.samples,
            "details": dict(sorted(self.details.items())),
        }

    @classmethod
    def merge(cls, reports: Sequence["CheckReport"]) -> "CheckReport":
        """Combine reports of one check run on disjoint point sets, in the given order."""
        if not reports:
            raise ValueError("Nothing to merge")
        first = reports[0]
        worst = [r.max_abs_residual for r in reports]
        details: dict[str, float] = {}
        for r in reports:
            for key, value in r.details.items():
                details[key] = max(details.get(key, value), value)
        return cls(
            first.name,
            float("nan") if any(np.isnan(worst)) else max(worst),
            first.tolerance,
            sum(r.samples for r in reports),
            details,
        )
