"""Score parity across demographic groups.

One-way ANOVA on group means plus Levene's test (mean-centred) on group
variances. Both tests need at least two groups with at least two
observations each.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class GroupSummary:
    group: str
    n: int
    mean: float
    sd: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class FairnessReport:
    groups: tuple[GroupSummary, ...]
    anova_f: float
    anova_p: float
    levene_w: float
    levene_p: float

    def to_dict(self) -> dict:
        return {
            "groups": [g.to_dict() for g in self.groups],
            "anova_f": self.anova_f,
            "anova_p": self.anova_p,
            "levene_w": self.levene_w,
            "levene_p": self.levene_p,
        }


def fairness_analysis(scores_by_group: Mapping[str, Sequence[float]]) -> FairnessReport:
    if len(scores_by_group) < 2:
        raise ValueError("at least two groups required")
    arrays = {g: np.asarray(s, dtype=float) for g, s in scores_by_group.items()}
    if any(len(a) < 2 for a in arrays.values()):
        raise ValueError("every group needs at least two observations")

    samples = list(arrays.values())
    anova_f, anova_p = stats.f_oneway(*samples)
    levene_w, levene_p = stats.levene(*samples, center="mean")
    groups = tuple(
        GroupSummary(group=g, n=len(a), mean=float(np.mean(a)), sd=float(np.std(a, ddof=1)))
        for g, a in arrays.items()
    )
    return FairnessReport(
        groups=groups,
        anova_f=float(anova_f),
        anova_p=float(anova_p),
        levene_w=float(levene_w),
        levene_p=float(levene_p),
    )
