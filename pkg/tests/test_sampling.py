from __future__ import annotations

from datetime import date

import numpy as np
import pytest

from medreview.ehr.models import complexity_features, Sex
from medreview.runner.sampling import (
    EvaluationSet,
    InsufficientPool,
    MatcherConfig,
    SampleCounts,
    sample_cases,
)
from medreview.runner.variants import make_ethnicity_variants
from medreview.ehr.render import render_profile

AS_OF = date(2023, 6, 1)


@pytest.fixture(scope="module")
def cohort_and_matches(small_cohort, rules, codes):
    from medreview.indicators.engine import apply_continuity, evaluate_rule

    profiles, _ = small_cohort
    matches = {p.patient_id: [] for p in profiles}
    for rule in rules:
        for p in profiles:
            ok, _ = apply_continuity(
                evaluate_rule(rule, p, AS_OF, codes), rule.continuity_min_days
            )
            if ok:
                matches[p.patient_id].append(rule.id)
    return profiles, matches


def _flags(profiles, matches):
    # Alternate system flags over the indicator-negative pool.
    negatives = [p.patient_id for p in profiles if not matches[p.patient_id]]
    return {pid: i % 2 == 0 for i, pid in enumerate(negatives)}


COUNTS = SampleCounts(
    indicator_positive=8,
    matched_negative=8,
    random_negative_system_positive=5,
    random_negative_system_negative=5,
)


def test_sampling_is_deterministic(cohort_and_matches):
    profiles, matches = cohort_and_matches
    flags = _flags(profiles, matches)
    a = sample_cases(profiles, matches, COUNTS, MatcherConfig(AS_OF), flags, seed=3)
    b = sample_cases(profiles, matches, COUNTS, MatcherConfig(AS_OF), flags, seed=3)
    assert a.to_dict() == b.to_dict()
    c = sample_cases(profiles, matches, COUNTS, MatcherConfig(AS_OF), flags, seed=4)
    assert a.to_dict() != c.to_dict()


def test_strata_sizes_and_disjointness(cohort_and_matches):
    profiles, matches = cohort_and_matches
    flags = _flags(profiles, matches)
    s = sample_cases(profiles, matches, COUNTS, MatcherConfig(AS_OF), flags, seed=3)
    assert len(s.indicator_positive) == 8
    assert len(s.matched_negative) == 8
    assert len(s.random_negative_system_positive) == 5
    assert len(s.random_negative_system_negative) == 5
    s.validate_disjoint()
    assert len(set(s.all_ids())) == 26


def test_positives_are_indicator_positive(cohort_and_matches):
    profiles, matches = cohort_and_matches
    flags = _flags(profiles, matches)
    s = sample_cases(profiles, matches, COUNTS, MatcherConfig(AS_OF), flags, seed=3)
    assert all(matches[pid] for pid in s.indicator_positive)
    for stratum in (s.matched_negative, s.random_negative_system_positive,
                    s.random_negative_system_negative):
        assert all(not matches[pid] for pid in stratum)


def test_positive_sample_spreads_over_indicators(cohort_and_matches):
    profiles, matches = cohort_and_matches
    flags = _flags(profiles, matches)
    s = sample_cases(profiles, matches, COUNTS, MatcherConfig(AS_OF), flags, seed=3)
    hit = {matches[pid][0].split("_")[1] for pid in s.indicator_positive}
    assert len(hit) == 8  # one per filter with these counts


def test_system_flag_split_respected(cohort_and_matches):
    profiles, matches = cohort_and_matches
    flags = _flags(profiles, matches)
    s = sample_cases(profiles, matches, COUNTS, MatcherConfig(AS_OF), flags, seed=3)
    assert all(flags[pid] for pid in s.random_negative_system_positive)
    assert all(not flags[pid] for pid in s.random_negative_system_negative)


def test_matched_negatives_minimize_feature_distance(cohort_and_matches):
    """Each greedy pick is the nearest remaining candidate to its target."""
    profiles, matches = cohort_and_matches
    flags = _flags(profiles, matches)
    by_id = {p.patient_id: p for p in profiles}
    counts = SampleCounts(4, 4, 0, 0)
    s = sample_cases(profiles, matches, counts, MatcherConfig(AS_OF), flags, seed=3)

    def vec(pid):
        f = complexity_features(by_id[pid], AS_OF)
        return np.array([
            float(f.age), 1.0 if by_id[pid].sex is Sex.FEMALE else 0.0,
            float(f.active_med_count), float(f.recent_gp_events),
        ])

    candidates = [p.patient_id for p in profiles
                  if not matches[p.patient_id] and p.patient_id not in s.indicator_positive]
    all_vecs = np.array([vec(pid) for pid in candidates + s.indicator_positive[:4]])
    mean, std = all_vecs.mean(axis=0), all_vecs.std(axis=0)
    std[std == 0] = 1.0

    remaining = set(candidates)
    for target_pid, picked_pid in zip(s.indicator_positive[:4], s.matched_negative):
        t = (vec(target_pid) - mean) / std
        best = min(remaining,
                   key=lambda pid: float(np.linalg.norm((vec(pid) - mean) / std - t)))
        assert np.isclose(
            np.linalg.norm((vec(picked_pid) - mean) / std - t),
            np.linalg.norm((vec(best) - mean) / std - t),
        )
        remaining.discard(picked_pid)


def test_insufficient_pools_raise(cohort_and_matches):
    profiles, matches = cohort_and_matches
    flags = _flags(profiles, matches)
    too_many = SampleCounts(1000, 0, 0, 0)
    with pytest.raises(InsufficientPool, match="indicator_positive"):
        sample_cases(profiles, matches, too_many, MatcherConfig(AS_OF), flags, seed=3)
    with pytest.raises(InsufficientPool, match="matched_negative"):
        sample_cases(profiles, matches, SampleCounts(1, 1000, 0, 0),
                     MatcherConfig(AS_OF), flags, seed=3)
    with pytest.raises(InsufficientPool, match="system_positive"):
        sample_cases(profiles, matches, SampleCounts(1, 1, 1000, 0),
                     MatcherConfig(AS_OF), flags, seed=3)


def test_evaluation_set_serde_round_trip(cohort_and_matches):
    profiles, matches = cohort_and_matches
    flags = _flags(profiles, matches)
    s = sample_cases(profiles, matches, COUNTS, MatcherConfig(AS_OF), flags, seed=3)
    assert EvaluationSet.from_dict(s.to_dict()).to_dict() == s.to_dict()


def test_overlapping_strata_rejected():
    s = EvaluationSet(indicator_positive=["a"], matched_negative=["a"])
    with pytest.raises(ValueError):
        s.validate_disjoint()


def test_ethnicity_variants_differ_by_one_line(small_cohort):
    profiles, _ = small_cohort
    base = profiles[0]
    variants = make_ethnicity_variants(base)
    assert [v.ethnicity.value for v in variants] == ["White", "Asian", "Black"]
    base_text = render_profile(base, AS_OF)
    for v in variants:
        text = render_profile(v, AS_OF)
        extra = set(text.splitlines()) - set(base_text.splitlines())
        assert extra == {f"- Ethnicity: {v.ethnicity.value}"}
        assert set(base_text.splitlines()) - set(text.splitlines()) == set()
