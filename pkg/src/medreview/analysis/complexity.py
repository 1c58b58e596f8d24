"""Relating review scores to patient complexity.

Covers pairwise Pearson correlations with t-test p-values, partial
correlations controlling for the remaining covariates (residual
method), and a least-squares fit of score on all covariates with r
squared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class CorrelationEntry:
    feature: str
    r: float
    p_value: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ComplexityReport:
    n: int
    correlations: tuple[CorrelationEntry, ...]
    partial_correlations: tuple[CorrelationEntry, ...]
    r_squared: float
    coefficients: dict[str, float]
    intercept: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "correlations": [c.to_dict() for c in self.correlations],
            "partial_correlations": [c.to_dict() for c in self.partial_correlations],
            "r_squared": self.r_squared,
            "coefficients": dict(self.coefficients),
            "intercept": self.intercept,
        }


def _residuals(y: np.ndarray, controls: np.ndarray) -> np.ndarray:
    design = np.column_stack([np.ones(len(y)), controls])
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    return y - design @ beta


def complexity_analysis(
    scores: Sequence[float], features: Mapping[str, Sequence[float]]
) -> ComplexityReport:
    if not features:
        raise ValueError("at least one feature required")
    y = np.asarray(scores, dtype=float)
    names = list(features)
    x = np.column_stack([np.asarray(features[name], dtype=float) for name in names])
    if x.shape[0] != y.shape[0]:
        raise ValueError("scores and features must have the same length")
    n = len(y)
    if n < len(names) + 2:
        raise ValueError("too few observations for the number of features")

    correlations = []
    for j, name in enumerate(names):
        r, p = stats.pearsonr(y, x[:, j])
        correlations.append(CorrelationEntry(feature=name, r=float(r), p_value=float(p)))

    partials = []
    for j, name in enumerate(names):
        others = np.delete(x, j, axis=1)
        if others.shape[1] == 0:
            r, p = stats.pearsonr(y, x[:, j])
        else:
            ry = _residuals(y, others)
            rx = _residuals(x[:, j], others)
            r, p = stats.pearsonr(ry, rx)
        partials.append(CorrelationEntry(feature=name, r=float(r), p_value=float(p)))

    design = np.column_stack([np.ones(n), x])
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    fitted = design @ beta
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0

    return ComplexityReport(
        n=n,
        correlations=tuple(correlations),
        partial_correlations=tuple(partials),
        r_squared=r_squared,
        coefficients={name: float(b) for name, b in zip(names, beta[1:])},
        intercept=float(beta[0]),
    )
