"""Clinician assessment records and ground truth types."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class IssueVerdict(str, Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"


class InterventionVerdict(str, Enum):
    CORRECT = "correct"
    PARTIAL = "partial"
    INCORRECT = "incorrect"
    NOT_APPLICABLE = "not_applicable"


class FailureReason(str, Enum):
    OVERCONFIDENCE_IN_UNCERTAINTY = "overconfidence_in_uncertainty"
    PROTOCOL_VS_PATIENT_GAP = "protocol_vs_patient_gap"
    PROTOCOL_VS_PRACTICE_GAP = "protocol_vs_practice_gap"
    COHERENT_BUT_FACTUALLY_INCORRECT = "coherent_but_factually_incorrect"
    PROCESS_BLINDNESS = "process_blindness"


class HarmCategory(str, Enum):
    NONE = "none"
    MILD = "mild"
    MODERATE = "moderate"
    SEVERE = "severe"
    DEATH = "death"


@dataclass(frozen=True)
class FailureAnnotation:
    reason: FailureReason
    mode: str
    harm: HarmCategory
    vignette_ref: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"reason": self.reason.value, "mode": self.mode, "harm": self.harm.value}
        if self.vignette_ref is not None:
            d["vignette_ref"] = self.vignette_ref
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FailureAnnotation":
        return cls(
            reason=FailureReason(d["reason"]),
            mode=d.get("mode", ""),
            harm=HarmCategory(d["harm"]),
            vignette_ref=d.get("vignette_ref"),
        )


@dataclass(frozen=True)
class AssessmentRecord:
    patient_id: str
    sufficient_information: bool
    clinician_flag: bool
    issue_verdicts: tuple[IssueVerdict, ...] = ()
    missed_issues: tuple[str, ...] = ()
    intervention_verdict: InterventionVerdict = InterventionVerdict.NOT_APPLICABLE
    failure_annotations: tuple[FailureAnnotation, ...] = ()
    notes: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "issue_verdicts", tuple(self.issue_verdicts))
        object.__setattr__(self, "missed_issues", tuple(self.missed_issues))
        object.__setattr__(self, "failure_annotations", tuple(self.failure_annotations))

    def to_dict(self) -> dict:
        return {
            "patient_id": self.patient_id,
            "sufficient_information": self.sufficient_information,
            "clinician_flag": self.clinician_flag,
            "issue_verdicts": [v.value for v in self.issue_verdicts],
            "missed_issues": list(self.missed_issues),
            "intervention_verdict": self.intervention_verdict.value,
            "failure_annotations": [a.to_dict() for a in self.failure_annotations],
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AssessmentRecord":
        return cls(
            patient_id=d["patient_id"],
            sufficient_information=bool(d["sufficient_information"]),
            clinician_flag=bool(d["clinician_flag"]),
            issue_verdicts=tuple(IssueVerdict(v) for v in d.get("issue_verdicts", [])),
            missed_issues=tuple(d.get("missed_issues", [])),
            intervention_verdict=InterventionVerdict(
                d.get("intervention_verdict", "not_applicable")
            ),
            failure_annotations=tuple(
                FailureAnnotation.from_dict(a) for a in d.get("failure_annotations", [])
            ),
            notes=d.get("notes", ""),
        )


@dataclass(frozen=True)
class GroundTruth:
    patient_id: str
    issues: tuple[str, ...]
    interventions: tuple[str, ...]
    no_issue: bool

    def __post_init__(self) -> None:
        object.__setattr__(self, "issues", tuple(self.issues))
        object.__setattr__(self, "interventions", tuple(self.interventions))
        if self.no_issue and (self.issues or self.interventions):
            raise ValueError("no_issue ground truth must have empty lists")

    def to_dict(self) -> dict:
        return {
            "patient_id": self.patient_id,
            "issues": list(self.issues),
            "interventions": list(self.interventions),
            "no_issue": self.no_issue,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroundTruth":
        return cls(
            patient_id=d["patient_id"],
            issues=tuple(d.get("issues", [])),
            interventions=tuple(d.get("interventions", [])),
            no_issue=bool(d["no_issue"]),
        )
