"""Head-to-head comparison of models on the same cohort.

Each model contributes per-epoch score lists over the same patients.
The model summary is the mean of per-epoch cohort means, with the SEM
taken over epoch means. Pairwise deltas report the relative change of
one model's mean against another's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class ModelSummary:
    model: str
    epoch_means: tuple[float, ...]
    mean: float
    sem: float

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "epoch_means": list(self.epoch_means),
            "mean": self.mean,
            "sem": self.sem,
        }


@dataclass(frozen=True)
class PairwiseDelta:
    model_a: str
    model_b: str
    absolute: float
    relative: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ComparisonReport:
    summaries: tuple[ModelSummary, ...]
    deltas: tuple[PairwiseDelta, ...]

    def to_dict(self) -> dict:
        return {
            "summaries": [s.to_dict() for s in self.summaries],
            "deltas": [d.to_dict() for d in self.deltas],
        }


def summarize_model(model: str, epochs: Sequence[Sequence[float]]) -> ModelSummary:
    if not epochs:
        raise ValueError(f"model {model!r}: at least one epoch required")
    if any(len(e) == 0 for e in epochs):
        raise ValueError(f"model {model!r}: empty epoch")
    means = tuple(float(np.mean(e)) for e in epochs)
    sem = float(np.std(means, ddof=1) / math.sqrt(len(means))) if len(means) > 1 else 0.0
    return ModelSummary(model=model, epoch_means=means, mean=float(np.mean(means)), sem=sem)


def compare_models(scores: Mapping[str, Sequence[Sequence[float]]]) -> ComparisonReport:
    summaries = tuple(summarize_model(m, e) for m, e in scores.items())
    by_name = {s.model: s for s in summaries}
    deltas = []
    names = [s.model for s in summaries]
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            sa, sb = by_name[a], by_name[b]
            if sb.mean == 0:
                raise ValueError(f"relative delta undefined: model {b!r} has mean 0")
            deltas.append(
                PairwiseDelta(
                    model_a=a,
                    model_b=b,
                    absolute=sa.mean - sb.mean,
                    relative=(sa.mean - sb.mean) / sb.mean,
                )
            )
    return ComparisonReport(summaries=summaries, deltas=tuple(deltas))
