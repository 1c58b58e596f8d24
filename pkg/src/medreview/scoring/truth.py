"""Ground-truth synthesis from a graded review.

The mechanical path keeps clinician-approved issues, drops rejected
ones, and appends the clinician's missed-issue statements; it needs no
model and is fully deterministic. A model-backed synthesizer can
replace it to produce cleaner canonical phrasings; its output is
validated against the same schema rules.
"""

from __future__ import annotations

import json
from typing import Callable, Optional

from ..runner.output import ReviewOutput, SchemaViolation, MalformedOutput, strip_code_fence
from .records import AssessmentRecord, GroundTruth, InterventionVerdict, IssueVerdict

#: Placeholder intervention when the clinician rejected the system's plan
#: but an intervention was still needed.
UNSPECIFIED_INTERVENTION = "Clinician-directed intervention (system proposal rejected)"


def mechanical_ground_truth(review: ReviewOutput, assessment: AssessmentRecord) -> GroundTruth:
    if not assessment.clinician_flag:
        return GroundTruth(
            patient_id=assessment.patient_id, issues=(), interventions=(), no_issue=True
        )
    issues = [
        issue.issue
        for issue, verdict in zip(review.clinical_issues, assessment.issue_verdicts)
        if verdict is IssueVerdict.CORRECT
    ]
    issues += list(assessment.missed_issues)
    if assessment.intervention_verdict is InterventionVerdict.CORRECT and review.intervention:
        interventions = [review.intervention]
    else:
        interventions = [UNSPECIFIED_INTERVENTION]
    return GroundTruth(
        patient_id=assessment.patient_id,
        issues=tuple(issues),
        interventions=tuple(interventions),
        no_issue=False,
    )


def _parse_synthesizer_output(raw: str, patient_id: str) -> GroundTruth:
    text, _ = strip_code_fence(raw)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedOutput(f"synthesizer output is not JSON: {e}", raw) from None
    if not isinstance(obj, dict):
        raise MalformedOutput("synthesizer output is not a JSON object", raw)
    for name, typ in (("issues", list), ("interventions", list), ("no_issue", bool)):
        if name not in obj or not isinstance(obj[name], typ):
            raise SchemaViolation(f"synthesizer output: bad field {name!r}", raw)
    return GroundTruth(
        patient_id=patient_id,
        issues=tuple(str(x) for x in obj["issues"]),
        interventions=tuple(str(x) for x in obj["interventions"]),
        no_issue=obj["no_issue"],
    )


def synthesize_ground_truth(
    review: ReviewOutput,
    assessment: AssessmentRecord,
    synthesizer: Optional[Callable[[str], str]] = None,
) -> GroundTruth:
    """Build ground truth; with no synthesizer, use the mechanical path.

    `synthesizer` is called with a JSON prompt document describing the
    review and the clinician verdicts, and must return a JSON object
    {issues, interventions, no_issue}.
    """
    if synthesizer is None:
        return mechanical_ground_truth(review, assessment)
    prompt = json.dumps(
        {
            "review": review.to_dict(),
            "assessment": assessment.to_dict(),
            "instruction": (
                "Synthesise the clinician verdicts into canonical lists of "
                "clinical issues and interventions. Respond with JSON: "
                '{"issues": [...], "interventions": [...], "no_issue": bool}'
            ),
        }
    )
    return _parse_synthesizer_output(synthesizer(prompt), assessment.patient_id)
