"""Session state: which patients exist and how far each has progressed.

Statuses move forward only. A patient starts pending, becomes reviewed
once model output is saved, then assessed once a clinician record is
appended; exclusion for insufficient information is allowed from
pending or reviewed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..runner.sampling import EvaluationSet


class PatientStatus(str, Enum):
    PENDING = "pending"
    REVIEWED = "reviewed"
    ASSESSED = "assessed"
    EXCLUDED_INSUFFICIENT = "excluded_insufficient"


_ALLOWED_TRANSITIONS = {
    PatientStatus.PENDING: {PatientStatus.REVIEWED, PatientStatus.EXCLUDED_INSUFFICIENT},
    PatientStatus.REVIEWED: {PatientStatus.ASSESSED, PatientStatus.EXCLUDED_INSUFFICIENT},
    PatientStatus.ASSESSED: set(),
    PatientStatus.EXCLUDED_INSUFFICIENT: set(),
}


class InvalidTransition(ValueError):
    """A status change that would move backwards or skip a stage."""


class UnknownPatient(KeyError):
    pass


@dataclass
class SessionRecord:
    session_id: str
    created_at: str
    cohort_ref: str
    evaluation_set: EvaluationSet
    model_configs: list[dict] = field(default_factory=list)
    status: dict[str, PatientStatus] = field(default_factory=dict)

    @classmethod
    def new(
        cls,
        session_id: str,
        created_at: str,
        cohort_ref: str,
        evaluation_set: EvaluationSet,
        model_configs: list[dict] | None = None,
    ) -> "SessionRecord":
        evaluation_set.validate_disjoint()
        return cls(
            session_id=session_id,
            created_at=created_at,
            cohort_ref=cohort_ref,
            evaluation_set=evaluation_set,
            model_configs=list(model_configs or []),
            status={pid: PatientStatus.PENDING for pid in evaluation_set.all_ids()},
        )

    def status_of(self, patient_id: str) -> PatientStatus:
        try:
            return self.status[patient_id]
        except KeyError:
            raise UnknownPatient(patient_id) from None

    def transition(self, patient_id: str, new: PatientStatus) -> None:
        current = self.status_of(patient_id)
        if new not in _ALLOWED_TRANSITIONS[current]:
            raise InvalidTransition(
                f"patient {patient_id}: cannot move {current.value} -> {new.value}"
            )
        self.status[patient_id] = new

    def counts(self) -> dict[str, int]:
        out = {s.value: 0 for s in PatientStatus}
        for s in self.status.values():
            out[s.value] += 1
        out["total"] = len(self.status)
        out["evaluable"] = out["total"] - out[PatientStatus.EXCLUDED_INSUFFICIENT.value]
        return out

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "created_at": self.created_at,
            "cohort_ref": self.cohort_ref,
            "evaluation_set": self.evaluation_set.to_dict(),
            "model_configs": list(self.model_configs),
            "status": {pid: s.value for pid, s in self.status.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SessionRecord":
        return cls(
            session_id=d["session_id"],
            created_at=d["created_at"],
            cohort_ref=d["cohort_ref"],
            evaluation_set=EvaluationSet.from_dict(d["evaluation_set"]),
            model_configs=list(d.get("model_configs", [])),
            status={pid: PatientStatus(s) for pid, s in d["status"].items()},
        )
