"""Clinician composite score: issue-identification F1 averaged with
categorical intervention credit.

Precision counts correct verdicts over the system's issues. Recall is
categorical: 1.0 with no missed issues, 0.5 when issues were missed but
some were correct, 0.0 when all were wrong and issues were missed. The
F1 of these is averaged with intervention credit (1.0 / 0.5 / 0.0);
when the system listed no issues the score is the intervention credit
alone. F1 is defined as 0 when precision and recall are both 0.
"""

from __future__ import annotations

from ..runner.output import ReviewOutput
from .levels import MisalignedAssessment
from .records import AssessmentRecord, InterventionVerdict, IssueVerdict


class InsufficientInformation(ValueError):
    """The case was excluded at sufficiency review and cannot be scored."""


_INTERVENTION_CREDIT = {
    InterventionVerdict.CORRECT: 1.0,
    InterventionVerdict.PARTIAL: 0.5,
    InterventionVerdict.INCORRECT: 0.0,
    # Nothing was needed and nothing was required of the system.
    InterventionVerdict.NOT_APPLICABLE: 1.0,
}


def issue_precision(review: ReviewOutput, assessment: AssessmentRecord) -> float:
    n = len(review.clinical_issues)
    if n == 0:
        raise ZeroDivisionError("precision undefined with no system issues")
    correct = sum(1 for v in assessment.issue_verdicts if v is IssueVerdict.CORRECT)
    return correct / n


def issue_recall(assessment: AssessmentRecord) -> float:
    if not assessment.missed_issues:
        return 1.0
    any_correct = any(v is IssueVerdict.CORRECT for v in assessment.issue_verdicts)
    return 0.5 if any_correct else 0.0


def f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def clinician_score(review: ReviewOutput, assessment: AssessmentRecord) -> float:
    if not assessment.sufficient_information:
        raise InsufficientInformation(
            f"patient {assessment.patient_id} was excluded for insufficient information"
        )
    if len(assessment.issue_verdicts) != len(review.clinical_issues):
        raise MisalignedAssessment(
            f"{len(assessment.issue_verdicts)} verdicts for "
            f"{len(review.clinical_issues)} reviewed issues"
        )
    s_int = _INTERVENTION_CREDIT[assessment.intervention_verdict]
    if not review.clinical_issues:
        return s_int
    f1_issue = f1(issue_precision(review, assessment), issue_recall(assessment))
    return (f1_issue + s_int) / 2
