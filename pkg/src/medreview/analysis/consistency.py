"""Run-to-run self-consistency and the anchoring-bias ceiling.

The ceiling is the accuracy implied by the model's own conditional
re-flagging behaviour: applying P(re-flag | first epoch flagged) to the
positive cases and P(stay negative | first epoch negative) to the
negative cases. Observed accuracy above that ceiling is the minimum
anchoring effect in the human grading.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class ConsistencyReport:
    per_patient_sd: tuple[float, ...]
    per_patient_range: tuple[float, ...]
    mean_sd: float
    median_sd: float
    p_reflag_given_flagged: float
    p_stay_negative_given_negative: float
    ceiling_accuracy: float
    anchoring_gap: Optional[float]

    def to_dict(self) -> dict:
        return {
            "per_patient_sd": list(self.per_patient_sd),
            "per_patient_range": list(self.per_patient_range),
            "mean_sd": self.mean_sd,
            "median_sd": self.median_sd,
            "p_reflag_given_flagged": self.p_reflag_given_flagged,
            "p_stay_negative_given_negative": self.p_stay_negative_given_negative,
            "ceiling_accuracy": self.ceiling_accuracy,
            "anchoring_gap": self.anchoring_gap,
        }


def consistency_ceiling(
    p_reflag: float, p_stay_negative: float, n_positive: int, n_negative: int
) -> float:
    total = n_positive + n_negative
    if total == 0:
        raise ValueError("at least one case required")
    return (n_positive * p_reflag + n_negative * p_stay_negative) / total


def self_consistency(
    runs: Sequence[Sequence[float]],
    flags: Sequence[Sequence[bool]],
    initial_flagged_n: int,
    initial_negative_n: int,
    observed_accuracy: Optional[float] = None,
) -> ConsistencyReport:
    """Per-patient score variability and conditional re-flag probabilities.

    `runs` holds per-patient score lists over epochs; `flags` the
    per-patient per-epoch intervention flags. The first epoch anchors
    the conditional probabilities.
    """
    if any(len(r) < 2 for r in runs) or any(len(f) < 2 for f in flags):
        raise ValueError("self-consistency requires at least 2 epochs per patient")

    sds = tuple(float(np.std(r, ddof=1)) for r in runs)
    ranges = tuple(float(max(r) - min(r)) for r in runs)

    reflag_hits = reflag_total = stay_hits = stay_total = 0
    for patient_flags in flags:
        first, rest = patient_flags[0], patient_flags[1:]
        if first:
            reflag_hits += sum(rest)
            reflag_total += len(rest)
        else:
            stay_hits += sum(1 for f in rest if not f)
            stay_total += len(rest)
    p_reflag = reflag_hits / reflag_total if reflag_total else 1.0
    p_stay = stay_hits / stay_total if stay_total else 1.0

    ceiling = consistency_ceiling(p_reflag, p_stay, initial_flagged_n, initial_negative_n)
    gap = None if observed_accuracy is None else observed_accuracy - ceiling
    return ConsistencyReport(
        per_patient_sd=sds,
        per_patient_range=ranges,
        mean_sd=float(np.mean(sds)),
        median_sd=float(np.median(sds)),
        p_reflag_given_flagged=p_reflag,
        p_stay_negative_given_negative=p_stay,
        ceiling_accuracy=ceiling,
        anchoring_gap=gap,
    )
