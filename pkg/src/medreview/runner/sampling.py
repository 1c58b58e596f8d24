"""Evaluation-set construction: three sampling strategies.

1. Indicator-positive patients, stratified across indicator ids.
2. Indicator-negative patients complexity-matched to strategy 1
   (z-score normalised Euclidean nearest neighbour, greedy without
   replacement, over age / sex / active prescriptions / GP events
   since 2020).
3. A fixed split of system-flagged and system-negative patients from
   the random indicator-negative pool.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from ..ehr.models import PatientProfile, Sex, complexity_features


class InsufficientPool(ValueError):
    """A sampling stratum cannot be filled; message names the stratum."""


@dataclass(frozen=True)
class SampleCounts:
    indicator_positive: int
    matched_negative: int
    random_negative_system_positive: int
    random_negative_system_negative: int


@dataclass(frozen=True)
class MatcherConfig:
    as_of: date
    normalization: str = "zscore"


@dataclass
class EvaluationSet:
    indicator_positive: list[str] = field(default_factory=list)
    matched_negative: list[str] = field(default_factory=list)
    random_negative_system_positive: list[str] = field(default_factory=list)
    random_negative_system_negative: list[str] = field(default_factory=list)

    def all_ids(self) -> list[str]:
        return (
            self.indicator_positive
            + self.matched_negative
            + self.random_negative_system_positive
            + self.random_negative_system_negative
        )

    def validate_disjoint(self) -> None:
        ids = self.all_ids()
        if len(ids) != len(set(ids)):
            raise ValueError("evaluation-set strata overlap")

    def to_dict(self) -> dict:
        return {
            "indicator_positive": self.indicator_positive,
            "matched_negative": self.matched_negative,
            "random_negative_system_positive": self.random_negative_system_positive,
            "random_negative_system_negative": self.random_negative_system_negative,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationSet":
        return cls(
            indicator_positive=list(d["indicator_positive"]),
            matched_negative=list(d["matched_negative"]),
            random_negative_system_positive=list(d["random_negative_system_positive"]),
            random_negative_system_negative=list(d["random_negative_system_negative"]),
        )


def _feature_vector(profile: PatientProfile, as_of: date) -> np.ndarray:
    f = complexity_features(profile, as_of)
    sex_ind = 1.0 if profile.sex is Sex.FEMALE else 0.0
    return np.array(
        [float(f.age), sex_ind, float(f.active_med_count), float(f.recent_gp_events)]
    )


def _stratified_positive_sample(
    positives: dict[str, list[str]], count: int, rng: random.Random
) -> list[str]:
    """Round-robin over indicator ids; redistributes when a stratum empties."""
    by_indicator: dict[str, list[str]] = {}
    for pid, indicator_ids in positives.items():
        # Assign each patient to one stratum (their first matched indicator).
        by_indicator.setdefault(sorted(indicator_ids)[0], []).append(pid)
    for pool in by_indicator.values():
        pool.sort()
        rng.shuffle(pool)
    if count > len(positives):
        raise InsufficientPool(
            f"indicator_positive: requested {count}, pool has {len(positives)}"
        )
    empty = [k for k in sorted(by_indicator) if not by_indicator[k]]
    chosen: list[str] = []
    order = sorted(by_indicator)
    while len(chosen) < count:
        progressed = False
        for indicator_id in order:
            if len(chosen) >= count:
                break
            pool = by_indicator[indicator_id]
            if pool:
                chosen.append(pool.pop())
                progressed = True
        if not progressed:
            break
    exhausted = [k for k in order if not by_indicator[k] and k not in empty]
    if len(chosen) < count:
        raise InsufficientPool(
            f"indicator_positive: only {len(chosen)} of {count} available"
        )
    if exhausted and len(order) > 1:
        warnings.warn(
            f"strata exhausted and redistributed: {', '.join(exhausted)}",
            stacklevel=3,
        )
    return chosen


def sample_cases(
    cohort: list[PatientProfile],
    indicator_results: dict[str, list[str]],
    counts: SampleCounts,
    matcher_config: MatcherConfig,
    system_flags: dict[str, bool],
    seed: int,
) -> EvaluationSet:
    """Build the three-strategy evaluation set; deterministic per seed."""
    rng = random.Random(seed)
    by_id = {p.patient_id: p for p in cohort}

    positives = {pid: ids for pid, ids in indicator_results.items() if ids}
    strategy1 = _stratified_positive_sample(positives, counts.indicator_positive, rng)

    negative_ids = sorted(pid for pid in by_id if pid not in positives)
    taken = set(strategy1)

    # Strategy 2: nearest-neighbour matching on normalised features.
    candidates = [pid for pid in negative_ids if pid not in taken]
    if counts.matched_negative > len(candidates):
        raise InsufficientPool(
            f"matched_negative: requested {counts.matched_negative}, "
            f"pool has {len(candidates)}"
        )
    as_of = matcher_config.as_of
    cand_vecs = np.array([_feature_vector(by_id[pid], as_of) for pid in candidates])
    target_ids = [strategy1[i % len(strategy1)] for i in range(counts.matched_negative)]
    target_vecs = np.array([_feature_vector(by_id[pid], as_of) for pid in target_ids])
    if matcher_config.normalization == "zscore" and len(cand_vecs):
        all_vecs = np.vstack([cand_vecs, target_vecs])
        mean, std = all_vecs.mean(axis=0), all_vecs.std(axis=0)
        std[std == 0] = 1.0
        cand_vecs = (cand_vecs - mean) / std
        target_vecs = (target_vecs - mean) / std
    available = list(range(len(candidates)))
    strategy2: list[str] = []
    for t in target_vecs:
        dists = np.linalg.norm(cand_vecs[available] - t, axis=1)
        pick = available.pop(int(np.argmin(dists)))
        strategy2.append(candidates[pick])
    taken |= set(strategy2)

    # Strategy 3: random indicator-negative pool split by prior system flag.
    pool3 = [pid for pid in negative_ids if pid not in taken and pid in system_flags]
    flagged = [pid for pid in pool3 if system_flags[pid]]
    unflagged = [pid for pid in pool3 if not system_flags[pid]]
    rng.shuffle(flagged)
    rng.shuffle(unflagged)
    if counts.random_negative_system_positive > len(flagged):
        raise InsufficientPool(
            f"random_negative_system_positive: requested "
            f"{counts.random_negative_system_positive}, pool has {len(flagged)}"
        )
    if counts.random_negative_system_negative > len(unflagged):
        raise InsufficientPool(
            f"random_negative_system_negative: requested "
            f"{counts.random_negative_system_negative}, pool has {len(unflagged)}"
        )
    strategy3_pos = sorted(flagged[: counts.random_negative_system_positive])
    strategy3_neg = sorted(unflagged[: counts.random_negative_system_negative])

    eval_set = EvaluationSet(
        indicator_positive=strategy1,
        matched_negative=strategy2,
        random_negative_system_positive=strategy3_pos,
        random_negative_system_negative=strategy3_neg,
    )
    eval_set.validate_disjoint()
    return eval_set
