"""Aggregation of failure annotations into a tally.

Counts annotations by reason, free-text mode, and potential-harm
category, with percentages rounded to one decimal place and the number
of distinct patients contributing annotations.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from ..scoring.records import FailureAnnotation


@dataclass(frozen=True)
class FailureTally:
    total: int
    distinct_patients: int
    by_reason: dict[str, int]
    by_mode: dict[str, int]
    by_harm: dict[str, int]

    def percentages(self, counts: dict[str, int]) -> dict[str, float]:
        if self.total == 0:
            return {k: 0.0 for k in counts}
        return {k: round(100 * v / self.total, 1) for k, v in counts.items()}

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "distinct_patients": self.distinct_patients,
            "by_reason": dict(self.by_reason),
            "by_reason_pct": self.percentages(self.by_reason),
            "by_mode": dict(self.by_mode),
            "by_mode_pct": self.percentages(self.by_mode),
            "by_harm": dict(self.by_harm),
            "by_harm_pct": self.percentages(self.by_harm),
        }


def failure_tally(annotations: Iterable[tuple[str, FailureAnnotation]]) -> FailureTally:
    """Tally (patient_id, annotation) pairs; a patient may appear many times."""
    reasons: Counter[str] = Counter()
    modes: Counter[str] = Counter()
    harms: Counter[str] = Counter()
    patients: set[str] = set()
    total = 0
    for patient_id, ann in annotations:
        total += 1
        patients.add(patient_id)
        reasons[ann.reason.value] += 1
        modes[ann.mode] += 1
        harms[ann.harm.value] += 1

    def ordered(c: Counter[str]) -> dict[str, int]:
        return dict(sorted(c.items(), key=lambda kv: (-kv[1], kv[0])))

    return FailureTally(
        total=total,
        distinct_patients=len(patients),
        by_reason=ordered(reasons),
        by_mode=ordered(modes),
        by_harm=ordered(harms),
    )
