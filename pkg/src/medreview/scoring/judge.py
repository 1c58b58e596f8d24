"""Automated scorer: ground-truth alignment judged by a matcher.

True negatives score 1.0 and one-sided disagreements on issue presence
score 0.0; otherwise the score is the mean of the issue-matching F1 and
the intervention-matching F1. The matcher is pluggable: an exact-match
mechanical judge (used in tests and offline runs) or a model endpoint
returning match index pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol, Sequence

from ..runner.output import MalformedOutput, ReviewOutput, SchemaViolation, strip_code_fence
from .composite import f1
from .records import GroundTruth


@dataclass(frozen=True)
class MatchSets:
    """Index pairs (system_idx, truth_idx) for matched items."""

    issue_matches: tuple[tuple[int, int], ...]
    intervention_matches: tuple[tuple[int, int], ...]


@dataclass
class MatchReport:
    matched_issues: list[str] = field(default_factory=list)
    missed_issues: list[str] = field(default_factory=list)
    spurious_issues: list[str] = field(default_factory=list)
    matched_interventions: list[str] = field(default_factory=list)
    missed_interventions: list[str] = field(default_factory=list)
    spurious_interventions: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


class Judge(Protocol):
    def match(
        self,
        system_issues: Sequence[str],
        truth_issues: Sequence[str],
        system_interventions: Sequence[str],
        truth_interventions: Sequence[str],
    ) -> MatchSets: ...


def _normalize(text: str) -> str:
    return " ".join(text.lower().split())


class MechanicalJudge:
    """Exact normalized-text matching; each item matches at most once."""

    def match(self, system_issues, truth_issues, system_interventions, truth_interventions):
        return MatchSets(
            issue_matches=self._greedy(system_issues, truth_issues),
            intervention_matches=self._greedy(system_interventions, truth_interventions),
        )

    @staticmethod
    def _greedy(system: Sequence[str], truth: Sequence[str]) -> tuple[tuple[int, int], ...]:
        remaining = {j: _normalize(t) for j, t in enumerate(truth)}
        pairs = []
        for i, s in enumerate(system):
            s_norm = _normalize(s)
            for j, t_norm in list(remaining.items()):
                if s_norm == t_norm:
                    pairs.append((i, j))
                    del remaining[j]
                    break
        return tuple(pairs)


class EndpointJudge:
    """Model-backed judge: sends both lists, expects JSON index pairs."""

    def __init__(self, complete: Callable[[str], str]):
        self.complete = complete

    def match(self, system_issues, truth_issues, system_interventions, truth_interventions):
        prompt = json.dumps(
            {
                "system_issues": list(system_issues),
                "truth_issues": list(truth_issues),
                "system_interventions": list(system_interventions),
                "truth_interventions": list(truth_interventions),
                "instruction": (
                    "Match semantically equivalent items. Respond with JSON: "
                    '{"issue_matches": [[i, j], ...], '
                    '"intervention_matches": [[i, j], ...]}'
                ),
            }
        )
        raw = self.complete(prompt)
        text, _ = strip_code_fence(raw)
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedOutput(f"judge output is not JSON: {e}", raw) from None
        if not isinstance(obj, dict):
            raise MalformedOutput("judge output is not a JSON object", raw)
        for name in ("issue_matches", "intervention_matches"):
            if name not in obj or not isinstance(obj[name], list):
                raise SchemaViolation(f"judge output: bad field {name!r}", raw)
        try:
            return MatchSets(
                issue_matches=tuple((int(a), int(b)) for a, b in obj["issue_matches"]),
                intervention_matches=tuple(
                    (int(a), int(b)) for a, b in obj["intervention_matches"]
                ),
            )
        except (TypeError, ValueError):
            raise SchemaViolation("judge output: match pairs must be index pairs", raw)


def automated_score(
    review: ReviewOutput,
    truth: GroundTruth,
    judge: Optional[Judge] = None,
) -> tuple[float, MatchReport]:
    judge = judge or MechanicalJudge()
    system_issues = [i.issue for i in review.clinical_issues]
    system_flagged = bool(system_issues)
    truth_flagged = not truth.no_issue

    report = MatchReport()
    if not system_flagged and not truth_flagged:
        return 1.0, report
    if system_flagged != truth_flagged:
        report.spurious_issues = list(system_issues)
        report.missed_issues = list(truth.issues)
        return 0.0, report

    system_interventions = [review.intervention] if review.intervention else []
    matches = judge.match(system_issues, truth.issues, system_interventions, truth.interventions)

    matched_sys = {i for i, _ in matches.issue_matches}
    matched_truth = {j for _, j in matches.issue_matches}
    report.matched_issues = [system_issues[i] for i in sorted(matched_sys)]
    report.spurious_issues = [
        s for i, s in enumerate(system_issues) if i not in matched_sys
    ]
    report.missed_issues = [
        t for j, t in enumerate(truth.issues) if j not in matched_truth
    ]
    p_issue = len(matched_sys) / len(system_issues)
    r_issue = len(matched_truth) / len(truth.issues)
    f1_issue = f1(p_issue, r_issue)

    matched_sys_int = {i for i, _ in matches.intervention_matches}
    matched_truth_int = {j for _, j in matches.intervention_matches}
    report.matched_interventions = [
        system_interventions[i] for i in sorted(matched_sys_int)
    ]
    report.spurious_interventions = [
        s for i, s in enumerate(system_interventions) if i not in matched_sys_int
    ]
    report.missed_interventions = [
        t for j, t in enumerate(truth.interventions) if j not in matched_truth_int
    ]
    if system_interventions and truth.interventions:
        p_int = len(matched_sys_int) / len(system_interventions)
        r_int = len(matched_truth_int) / len(truth.interventions)
        f1_int = f1(p_int, r_int)
    elif not system_interventions and not truth.interventions:
        f1_int = 1.0
    else:
        f1_int = 0.0

    return (f1_issue + f1_int) / 2, report
