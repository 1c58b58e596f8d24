"""Rule AST for prescribing-safety indicators.

A rule names a boolean/temporal condition over a patient's coded record,
a continuity threshold in days, and the start of the evaluation window.
Conditions are built from five leaf predicates plus AND/OR/NOT.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Union


class RuleValidationError(ValueError):
    """The rule structure violates an invariant (empty set, bad window)."""


@dataclass(frozen=True)
class OnMedication:
    code_set: str


@dataclass(frozen=True)
class HasDiagnosis:
    code_set: str


@dataclass(frozen=True)
class ObservationAbove:
    code_set: str
    threshold: float
    unit: str


@dataclass(frozen=True)
class MissingCoprescription:
    code_set: str
    lookback_days: int


@dataclass(frozen=True)
class MissingMonitoring:
    code_set: str
    window_days: int


@dataclass(frozen=True)
class And:
    children: tuple["Condition", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Condition", ...]


@dataclass(frozen=True)
class Not:
    child: "Condition"


Condition = Union[
    OnMedication,
    HasDiagnosis,
    ObservationAbove,
    MissingCoprescription,
    MissingMonitoring,
    And,
    Or,
    Not,
]

LEAF_TYPES = (
    OnMedication,
    HasDiagnosis,
    ObservationAbove,
    MissingCoprescription,
    MissingMonitoring,
)

DEFAULT_CONTINUITY_DAYS = 14
DEFAULT_SINCE = date(2020, 1, 1)


def validate_condition(cond: Condition) -> None:
    if isinstance(cond, (And, Or)):
        if not cond.children:
            raise RuleValidationError("AND/OR requires at least one child")
        for c in cond.children:
            validate_condition(c)
    elif isinstance(cond, Not):
        validate_condition(cond.child)
    elif isinstance(cond, LEAF_TYPES):
        if not cond.code_set:
            raise RuleValidationError("leaf predicate requires a code-set name")
        if isinstance(cond, MissingCoprescription) and cond.lookback_days <= 0:
            raise RuleValidationError("lookback_days must be positive")
        if isinstance(cond, MissingMonitoring) and cond.window_days <= 0:
            raise RuleValidationError("window_days must be positive")
    else:
        raise RuleValidationError(f"unknown condition node {cond!r}")


def condition_code_sets(cond: Condition) -> set[str]:
    if isinstance(cond, (And, Or)):
        out: set[str] = set()
        for c in cond.children:
            out |= condition_code_sets(c)
        return out
    if isinstance(cond, Not):
        return condition_code_sets(cond.child)
    return {cond.code_set}


@dataclass(frozen=True)
class IndicatorRule:
    id: str
    title: str
    condition: Condition
    continuity_min_days: int = DEFAULT_CONTINUITY_DAYS
    since: date = DEFAULT_SINCE

    def __post_init__(self) -> None:
        if self.continuity_min_days < 1:
            raise RuleValidationError("continuity_min_days must be >= 1")
        validate_condition(self.condition)


def serialize_condition(cond: Condition) -> str:
    """Canonical source form of a condition (parenthesised, single line)."""
    if isinstance(cond, OnMedication):
        return f"ON_MEDICATION({cond.code_set})"
    if isinstance(cond, HasDiagnosis):
        return f"HAS_DIAGNOSIS({cond.code_set})"
    if isinstance(cond, ObservationAbove):
        return f"OBSERVATION_ABOVE({cond.code_set}, {cond.threshold:g} {cond.unit})"
    if isinstance(cond, MissingCoprescription):
        return f"MISSING_COPRESCRIPTION({cond.code_set}, {cond.lookback_days})"
    if isinstance(cond, MissingMonitoring):
        return f"MISSING_MONITORING({cond.code_set}, {cond.window_days})"
    if isinstance(cond, Not):
        return f"NOT ({serialize_condition(cond.child)})"
    if isinstance(cond, And):
        return "(" + " AND ".join(serialize_condition(c) for c in cond.children) + ")"
    if isinstance(cond, Or):
        return "(" + " OR ".join(serialize_condition(c) for c in cond.children) + ")"
    raise RuleValidationError(f"unknown condition node {cond!r}")


def serialize_rule(rule: IndicatorRule) -> str:
    return (
        f'rule {rule.id} "{rule.title}"\n'
        f"continuity {rule.continuity_min_days}\n"
        f"since {rule.since.isoformat()}\n"
        f"when {serialize_condition(rule.condition)}\n"
    )
