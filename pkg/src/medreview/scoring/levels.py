"""Hierarchical level classification of one reviewed case.

Level 1 asks whether any issue was flagged when one was present;
Level 2 (reached only from an identified Level 1) asks whether the
flagged issues were the right ones; Level 3 is reached only when every
issue was correct and none were missed, and grades the intervention.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..runner.output import ReviewOutput
from .records import AssessmentRecord, InterventionVerdict, IssueVerdict


class Level1(str, Enum):
    IDENTIFIED = "identified"
    NOT_IDENTIFIED = "not_identified"
    NOT_APPLICABLE = "not_applicable"


class Level2(str, Enum):
    ALL_CORRECT = "all_correct"
    SOME_CORRECT = "some_correct"
    NONE_CORRECT = "none_correct"
    NOT_REACHED = "not_reached"


class Level3(str, Enum):
    CORRECT = "correct"
    PARTIAL = "partial"
    INCORRECT = "incorrect"
    NOT_REACHED = "not_reached"


class BinaryCell(str, Enum):
    TP = "TP"
    FP = "FP"
    TN = "TN"
    FN = "FN"


@dataclass(frozen=True)
class LevelOutcome:
    level1: Level1
    level2: Level2
    level3: Level3
    binary_cell: BinaryCell

    def to_dict(self) -> dict:
        return {
            "level1": self.level1.value,
            "level2": self.level2.value,
            "level3": self.level3.value,
            "binary_cell": self.binary_cell.value,
        }


class MisalignedAssessment(ValueError):
    """Verdict list does not line up with the reviewed issues."""


_LEVEL3_FROM_VERDICT = {
    InterventionVerdict.CORRECT: Level3.CORRECT,
    InterventionVerdict.PARTIAL: Level3.PARTIAL,
    InterventionVerdict.INCORRECT: Level3.INCORRECT,
}


def classify_levels(review: ReviewOutput, assessment: AssessmentRecord) -> LevelOutcome:
    if len(assessment.issue_verdicts) != len(review.clinical_issues):
        raise MisalignedAssessment(
            f"{len(assessment.issue_verdicts)} verdicts for "
            f"{len(review.clinical_issues)} reviewed issues"
        )
    system_flag = review.intervention_required
    clin_flag = assessment.clinician_flag

    if system_flag and clin_flag:
        cell = BinaryCell.TP
    elif system_flag:
        cell = BinaryCell.FP
    elif clin_flag:
        cell = BinaryCell.FN
    else:
        cell = BinaryCell.TN

    if not clin_flag:
        return LevelOutcome(Level1.NOT_APPLICABLE, Level2.NOT_REACHED, Level3.NOT_REACHED, cell)
    if not system_flag:
        return LevelOutcome(Level1.NOT_IDENTIFIED, Level2.NOT_REACHED, Level3.NOT_REACHED, cell)

    n_correct = sum(1 for v in assessment.issue_verdicts if v is IssueVerdict.CORRECT)
    all_correct = n_correct == len(assessment.issue_verdicts)
    if all_correct and not assessment.missed_issues:
        level2 = Level2.ALL_CORRECT
    elif n_correct >= 1 or (all_correct and assessment.missed_issues):
        level2 = Level2.SOME_CORRECT
    else:
        level2 = Level2.NONE_CORRECT

    level3 = Level3.NOT_REACHED
    if level2 is Level2.ALL_CORRECT:
        level3 = _LEVEL3_FROM_VERDICT.get(assessment.intervention_verdict, Level3.NOT_REACHED)
    return LevelOutcome(Level1.IDENTIFIED, level2, level3, cell)
