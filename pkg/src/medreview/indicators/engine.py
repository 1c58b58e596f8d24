"""Temporal evaluation of indicator rules over patient profiles.

Day is the temporal granularity; match intervals are inclusive on both
ends. Each condition leaf is evaluated as a boolean vector over the
window [rule.since, horizon] and combined structurally, then runs of
true days are coalesced into maximal intervals.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from ..ehr.codes import CodeDictionary
from ..ehr.models import EventKind, PatientProfile
from .rules import (
    And,
    Condition,
    HasDiagnosis,
    IndicatorRule,
    MissingCoprescription,
    MissingMonitoring,
    Not,
    ObservationAbove,
    OnMedication,
    Or,
)


@dataclass(frozen=True)
class MatchInterval:
    patient_id: str
    start: date
    end: date

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise ValueError(f"interval end {self.end} before start {self.start}")

    @property
    def days(self) -> int:
        return (self.end - self.start).days + 1


@dataclass(frozen=True)
class PrevalenceRow:
    indicator_id: str
    matched_patients: int
    point_prevalence_per_million: float
    pct_time_matching: float


def _medication_active_days(
    profile: PatientProfile,
    code_set: frozenset[str],
    window_start: date,
    horizon: date,
) -> np.ndarray:
    n = (horizon - window_start).days + 1
    out = np.zeros(n, dtype=bool)
    for iv in profile.medication_intervals():
        if iv.code not in code_set:
            continue
        a = (max(iv.start, window_start) - window_start).days
        last_active = horizon if iv.end is None else iv.end - timedelta(days=1)
        b = (min(last_active, horizon) - window_start).days
        if 0 <= a <= b:
            out[a : b + 1] = True
    return out


def _window_any(series: np.ndarray, lookback: int, n: int) -> np.ndarray:
    """series covers [since - lookback, horizon]; returns, per day d in
    [since, horizon], whether any true day falls in [d - lookback, d]."""
    c = np.concatenate([[0], np.cumsum(series.astype(np.int64))])
    idx = np.arange(n) + lookback
    lo = np.maximum(idx - lookback, 0)
    return (c[idx + 1] - c[lo]) > 0


def _eval_leaf(
    cond: Condition,
    profile: PatientProfile,
    since: date,
    horizon: date,
    codes: CodeDictionary,
) -> np.ndarray:
    n = (horizon - since).days + 1

    if isinstance(cond, OnMedication):
        return _medication_active_days(profile, codes.resolve_set(cond.code_set), since, horizon)

    if isinstance(cond, HasDiagnosis):
        code_set = codes.resolve_set(cond.code_set)
        dates = [
            e.date
            for e in profile.events
            if e.kind is EventKind.DIAGNOSIS and e.code in code_set
        ]
        out = np.zeros(n, dtype=bool)
        if dates:
            first = (max(min(dates), since) - since).days
            if first < n:
                out[max(first, 0) :] = True
        return out

    if isinstance(cond, ObservationAbove):
        code_set = codes.resolve_set(cond.code_set)
        obs = [
            e
            for e in profile.events
            if e.kind in (EventKind.OBSERVATION, EventKind.LAB_RESULT)
            and e.code in code_set
            and e.value is not None
            and (not cond.unit or e.value.unit.lower() == cond.unit.lower())
        ]
        out = np.zeros(n, dtype=bool)
        # Step function: the latest reading on or before each day decides.
        obs.sort(key=lambda e: e.date)
        for i, e in enumerate(obs):
            lo = max((e.date - since).days, 0)
            hi = n - 1
            if i + 1 < len(obs):
                hi = min(hi, (obs[i + 1].date - since).days - 1)
            if hi < 0 or lo > n - 1 or lo > hi:
                continue
            out[lo : hi + 1] = e.value.amount >= cond.threshold
        return out

    if isinstance(cond, MissingCoprescription):
        lb = cond.lookback_days
        active = _medication_active_days(
            profile, codes.resolve_set(cond.code_set), since - timedelta(days=lb), horizon
        )
        return ~_window_any(active, lb, n)

    if isinstance(cond, MissingMonitoring):
        w = cond.window_days
        code_set = codes.resolve_set(cond.code_set)
        ext_start = since - timedelta(days=w)
        ext_n = (horizon - ext_start).days + 1
        labs = np.zeros(ext_n, dtype=bool)
        for e in profile.events:
            if e.kind is EventKind.LAB_RESULT and e.code in code_set:
                i = (e.date - ext_start).days
                if 0 <= i < ext_n:
                    labs[i] = True
        return ~_window_any(labs, w, n)

    raise TypeError(f"not a leaf: {cond!r}")


def _eval_condition(
    cond: Condition,
    profile: PatientProfile,
    since: date,
    horizon: date,
    codes: CodeDictionary,
) -> np.ndarray:
    if isinstance(cond, And):
        out = _eval_condition(cond.children[0], profile, since, horizon, codes)
        for c in cond.children[1:]:
            out = out & _eval_condition(c, profile, since, horizon, codes)
        return out
    if isinstance(cond, Or):
        out = _eval_condition(cond.children[0], profile, since, horizon, codes)
        for c in cond.children[1:]:
            out = out | _eval_condition(c, profile, since, horizon, codes)
        return out
    if isinstance(cond, Not):
        return ~_eval_condition(cond.child, profile, since, horizon, codes)
    return _eval_leaf(cond, profile, since, horizon, codes)


def coalesce_days(patient_id: str, mask: np.ndarray, since: date) -> list[MatchInterval]:
    """Runs of consecutive true days, as maximal inclusive intervals."""
    intervals: list[MatchInterval] = []
    padded = np.concatenate([[False], mask, [False]])
    diffs = np.diff(padded.astype(np.int8))
    starts = np.flatnonzero(diffs == 1)
    ends = np.flatnonzero(diffs == -1) - 1
    for a, b in zip(starts, ends):
        intervals.append(
            MatchInterval(
                patient_id=patient_id,
                start=since + timedelta(days=int(a)),
                end=since + timedelta(days=int(b)),
            )
        )
    return intervals


def evaluate_rule(
    rule: IndicatorRule,
    profile: PatientProfile,
    horizon: date,
    codes: CodeDictionary,
) -> list[MatchInterval]:
    """Maximal date intervals on which the rule condition holds."""
    if horizon < rule.since:
        raise ValueError(f"horizon {horizon} precedes rule window start {rule.since}")
    mask = _eval_condition(rule.condition, profile, rule.since, horizon, codes)
    return coalesce_days(profile.patient_id, mask, rule.since)


def apply_continuity(
    intervals: list[MatchInterval], min_days: int
) -> tuple[bool, list[MatchInterval]]:
    qualifying = [iv for iv in intervals if iv.days >= min_days]
    return bool(qualifying), qualifying


def prevalence_stats(
    cohort: list[PatientProfile],
    rules: list[IndicatorRule],
    horizon: date,
    codes: CodeDictionary,
) -> list[PrevalenceRow]:
    """Cohort-level prevalence per indicator.

    Point prevalence is the expected per-million count flagged on a
    uniformly random day of the window; pct_time_matching averages only
    over patients who matched.
    """
    if not cohort:
        raise ValueError("cohort is empty")
    rows = []
    for rule in rules:
        if horizon <= rule.since:
            raise ValueError(f"horizon {horizon} must be after {rule.since}")
        total_days = (horizon - rule.since).days + 1
        fractions = []
        matched_fractions = []
        for profile in cohort:
            intervals = evaluate_rule(rule, profile, horizon, codes)
            matched, qualifying = apply_continuity(intervals, rule.continuity_min_days)
            q_days = sum(iv.days for iv in qualifying)
            fractions.append(q_days / total_days)
            if matched:
                matched_fractions.append(q_days / total_days)
        rows.append(
            PrevalenceRow(
                indicator_id=rule.id,
                matched_patients=len(matched_fractions),
                point_prevalence_per_million=1e6 * float(np.mean(fractions)),
                pct_time_matching=(
                    100.0 * float(np.mean(matched_fractions)) if matched_fractions else 0.0
                ),
            )
        )
    return rows


def write_prevalence_csv(rows: list[PrevalenceRow], path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["indicator_id", "matched_patients", "point_prevalence_per_million", "pct_time_matching"]
        )
        for r in rows:
            writer.writerow(
                [
                    r.indicator_id,
                    r.matched_patients,
                    f"{r.point_prevalence_per_million:.3f}",
                    f"{r.pct_time_matching:.3f}",
                ]
            )
