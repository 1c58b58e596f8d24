"""Reweighting of evaluation-cohort metrics to a target population.

The evaluation cohort over-samples flagged cases. Given the deployment
flag rate and the per-arm predictive values measured on the cohort, the
expected confusion-cell fractions in the target population are

    TP = f * ppv        FP = f * (1 - ppv)
    TN = (1 - f) * npv  FN = (1 - f) * (1 - npv)

with f the flag rate. All downstream metrics follow from those four
fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class PopulationMetrics:
    tp: float
    fp: float
    tn: float
    fn: float
    prevalence: float
    sensitivity: Optional[float]
    specificity: Optional[float]
    ppv: Optional[float]
    npv: Optional[float]
    accuracy: float
    kappa: Optional[float]
    f1: Optional[float]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _safe_div(num: float, denom: float) -> Optional[float]:
    return num / denom if denom > 0 else None


def metrics_from_fractions(tp: float, fp: float, tn: float, fn: float) -> PopulationMetrics:
    total = tp + fp + tn + fn
    if total <= 0:
        raise ValueError("cell fractions must sum to a positive total")
    tp, fp, tn, fn = (x / total for x in (tp, fp, tn, fn))

    sens = _safe_div(tp, tp + fn)
    spec = _safe_div(tn, tn + fp)
    ppv = _safe_div(tp, tp + fp)
    npv = _safe_div(tn, tn + fn)
    accuracy = tp + tn

    p_pos_pred = tp + fp
    p_pos_true = tp + fn
    pe = p_pos_pred * p_pos_true + (1 - p_pos_pred) * (1 - p_pos_true)
    kappa = None if pe == 1.0 else (accuracy - pe) / (1 - pe)

    f1 = None
    if ppv is not None and sens is not None and ppv + sens > 0:
        f1 = 2 * ppv * sens / (ppv + sens)
    return PopulationMetrics(
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        prevalence=tp + fn,
        sensitivity=sens,
        specificity=spec,
        ppv=ppv,
        npv=npv,
        accuracy=accuracy,
        kappa=kappa,
        f1=f1,
    )


def reweight_population(flag_rate: float, ppv: float, npv: float) -> PopulationMetrics:
    for name, value in (("flag_rate", flag_rate), ("ppv", ppv), ("npv", npv)):
        if not 0 <= value <= 1:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    return metrics_from_fractions(
        tp=flag_rate * ppv,
        fp=flag_rate * (1 - ppv),
        tn=(1 - flag_rate) * npv,
        fn=(1 - flag_rate) * (1 - npv),
    )
