"""Clinician and automated scoring, level classification, and metrics."""

from .composite import (
    InsufficientInformation,
    clinician_score,
    f1,
    issue_precision,
    issue_recall,
)
from .judge import (
    EndpointJudge,
    Judge,
    MatchReport,
    MatchSets,
    MechanicalJudge,
    automated_score,
)
from .levels import (
    BinaryCell,
    Level1,
    Level2,
    Level3,
    LevelOutcome,
    MisalignedAssessment,
    classify_levels,
)
from .metrics import (
    ConfusionCells,
    MetricWithCI,
    MetricsWithCIs,
    binary_metrics,
    cohen_kappa,
    wilson_interval,
)
from .records import (
    AssessmentRecord,
    FailureAnnotation,
    FailureReason,
    GroundTruth,
    HarmCategory,
    InterventionVerdict,
    IssueVerdict,
)
from .truth import (
    UNSPECIFIED_INTERVENTION,
    mechanical_ground_truth,
    synthesize_ground_truth,
)

__all__ = [
    "AssessmentRecord",
    "BinaryCell",
    "ConfusionCells",
    "EndpointJudge",
    "FailureAnnotation",
    "FailureReason",
    "GroundTruth",
    "HarmCategory",
    "InsufficientInformation",
    "InterventionVerdict",
    "IssueVerdict",
    "Judge",
    "Level1",
    "Level2",
    "Level3",
    "LevelOutcome",
    "MatchReport",
    "MatchSets",
    "MechanicalJudge",
    "MetricWithCI",
    "MetricsWithCIs",
    "MisalignedAssessment",
    "UNSPECIFIED_INTERVENTION",
    "automated_score",
    "binary_metrics",
    "classify_levels",
    "clinician_score",
    "cohen_kappa",
    "f1",
    "issue_precision",
    "issue_recall",
    "mechanical_ground_truth",
    "synthesize_ground_truth",
    "wilson_interval",
]
