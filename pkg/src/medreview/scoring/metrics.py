"""Binary classification metrics with Wilson score intervals.

Undefined metrics (zero denominator) are reported as absent (None),
never coerced to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.stats import norm


def wilson_interval(successes: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= successes <= n:
        raise ValueError(f"successes {successes} outside [0, {n}]")
    if not 0 < confidence < 1:
        raise ValueError("confidence must be in (0, 1)")
    z = float(norm.ppf(1 - (1 - confidence) / 2))
    p = successes / n
    z2 = z * z
    denom = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n))
    low, high = max(0.0, center - half), min(1.0, center + half)
    if successes == 0:
        low = 0.0
    if successes == n:
        high = 1.0
    return low, high


@dataclass(frozen=True)
class MetricWithCI:
    value: float
    ci_low: float
    ci_high: float

    def to_dict(self) -> dict:
        return {"value": self.value, "ci_low": self.ci_low, "ci_high": self.ci_high}


@dataclass(frozen=True)
class ConfusionCells:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("cell counts must be non-negative")
        if self.total < 1:
            raise ValueError("at least one observation required")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricsWithCIs:
    sensitivity: Optional[MetricWithCI]
    specificity: Optional[MetricWithCI]
    ppv: Optional[MetricWithCI]
    npv: Optional[MetricWithCI]
    accuracy: MetricWithCI
    kappa: Optional[float]
    f1: Optional[float]

    def to_dict(self) -> dict:
        return {
            name: (m.to_dict() if isinstance(m, MetricWithCI) else m)
            for name, m in self.__dict__.items()
        }


def _ratio_ci(num: int, denom: int, confidence: float) -> Optional[MetricWithCI]:
    if denom == 0:
        return None
    low, high = wilson_interval(num, denom, confidence)
    return MetricWithCI(num / denom, low, high)


def cohen_kappa(cells: ConfusionCells) -> Optional[float]:
    n = cells.total
    po = (cells.tp + cells.tn) / n
    p_pos_pred = (cells.tp + cells.fp) / n
    p_pos_true = (cells.tp + cells.fn) / n
    pe = p_pos_pred * p_pos_true + (1 - p_pos_pred) * (1 - p_pos_true)
    if pe == 1.0:
        return None
    return (po - pe) / (1 - pe)


def binary_metrics(cells: ConfusionCells, confidence: float = 0.95) -> MetricsWithCIs:
    sens = _ratio_ci(cells.tp, cells.tp + cells.fn, confidence)
    spec = _ratio_ci(cells.tn, cells.tn + cells.fp, confidence)
    ppv = _ratio_ci(cells.tp, cells.tp + cells.fp, confidence)
    npv = _ratio_ci(cells.tn, cells.tn + cells.fn, confidence)
    accuracy = _ratio_ci(cells.tp + cells.tn, cells.total, confidence)
    assert accuracy is not None
    f1_score: Optional[float] = None
    if ppv is not None and sens is not None and (ppv.value + sens.value) > 0:
        f1_score = 2 * ppv.value * sens.value / (ppv.value + sens.value)
    return MetricsWithCIs(
        sensitivity=sens,
        specificity=spec,
        ppv=ppv,
        npv=npv,
        accuracy=accuracy,
        kappa=cohen_kappa(cells),
        f1=f1_score,
    )
