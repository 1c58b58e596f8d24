"""Structured review output: schema, strict parsing, serialization.

The review model must return a single JSON object with exactly the
documented fields. Parsing is strict (missing, extra, or mistyped
fields are rejected) with one documented leniency: a fenced code block
wrapper around the JSON is stripped and counted.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field


class OutputError(ValueError):
    """Base class for review-output failures; carries the raw text for audit."""

    def __init__(self, message: str, raw: str):
        super().__init__(message)
        self.raw = raw


class MalformedOutput(OutputError):
    """The completion is not a JSON object."""


class SchemaViolation(OutputError):
    """Missing/extra field or wrong type."""


class RangeViolation(OutputError):
    """A numeric field is outside its allowed range."""


@dataclass(frozen=True)
class ClinicalIssue:
    issue: str
    evidence: str
    intervention_required: bool

    def to_dict(self) -> dict:
        return {
            "issue": self.issue,
            "evidence": self.evidence,
            "intervention_required": self.intervention_required,
        }


@dataclass(frozen=True)
class ReviewOutput:
    patient_review: str
    clinical_issues: tuple[ClinicalIssue, ...]
    intervention: str
    intervention_required: bool
    intervention_probability: float

    def to_dict(self) -> dict:
        return {
            "patient_review": self.patient_review,
            "clinical_issues": [i.to_dict() for i in self.clinical_issues],
            "intervention": self.intervention,
            "intervention_required": self.intervention_required,
            "intervention_probability": self.intervention_probability,
        }


def serialize_review_output(output: ReviewOutput) -> str:
    return json.dumps(output.to_dict(), indent=2)


_FENCE_RE = re.compile(r"\A\s*```(?:json)?\s*\n(.*)\n\s*```\s*\Z", re.DOTALL)

_TOP_FIELDS = {
    "patient_review": str,
    "clinical_issues": list,
    "intervention": str,
    "intervention_required": bool,
    "intervention_probability": (int, float),
}
_ISSUE_FIELDS = {
    "issue": str,
    "evidence": str,
    "intervention_required": bool,
}


def strip_code_fence(raw: str) -> tuple[str, bool]:
    m = _FENCE_RE.match(raw)
    if m:
        return m.group(1), True
    return raw, False


def _check_fields(obj: dict, spec: dict, context: str, raw: str) -> None:
    missing = sorted(set(spec) - set(obj))
    extra = sorted(set(obj) - set(spec))
    if missing:
        raise SchemaViolation(f"{context}: missing field(s) {missing}", raw)
    if extra:
        raise SchemaViolation(f"{context}: unexpected field(s) {extra}", raw)
    for name, expected in spec.items():
        value = obj[name]
        if expected is bool or expected is str or expected is list:
            ok = isinstance(value, expected)
        else:  # numeric: bool is an int subclass, exclude it
            ok = isinstance(value, expected) and not isinstance(value, bool)
        if not ok:
            raise SchemaViolation(
                f"{context}: field {name!r} has wrong type {type(value).__name__}", raw
            )


def parse_review_output(raw: str) -> ReviewOutput:
    text, _fenced = strip_code_fence(raw)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedOutput(f"completion is not JSON: {e}", raw) from None
    if not isinstance(obj, dict):
        raise MalformedOutput(
            f"completion is {type(obj).__name__}, expected a JSON object", raw
        )
    _check_fields(obj, _TOP_FIELDS, "review output", raw)
    issues = []
    for i, item in enumerate(obj["clinical_issues"]):
        if not isinstance(item, dict):
            raise SchemaViolation(f"clinical_issues[{i}] is not an object", raw)
        _check_fields(item, _ISSUE_FIELDS, f"clinical_issues[{i}]", raw)
        issues.append(
            ClinicalIssue(
                issue=item["issue"],
                evidence=item["evidence"],
                intervention_required=item["intervention_required"],
            )
        )
    probability = float(obj["intervention_probability"])
    if not 0.0 <= probability <= 1.0:
        raise RangeViolation(
            f"intervention_probability {probability} outside [0, 1]", raw
        )
    return ReviewOutput(
        patient_review=obj["patient_review"],
        clinical_issues=tuple(issues),
        intervention=obj["intervention"],
        intervention_required=obj["intervention_required"],
        intervention_probability=probability,
    )
