"""Prescribing-safety indicator rules: DSL, parser, and evaluation engine."""

from .engine import (
    MatchInterval,
    PrevalenceRow,
    apply_continuity,
    coalesce_days,
    evaluate_rule,
    prevalence_stats,
    write_prevalence_csv,
)
from .parser import (
    RuleSyntaxError,
    load_rule_file,
    load_rules_dir,
    load_shipped_rules,
    parse_rule,
)
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
    serialize_rule,
)

__all__ = [
    "And",
    "Condition",
    "HasDiagnosis",
    "IndicatorRule",
    "MatchInterval",
    "MissingCoprescription",
    "MissingMonitoring",
    "Not",
    "ObservationAbove",
    "OnMedication",
    "Or",
    "PrevalenceRow",
    "RuleSyntaxError",
    "apply_continuity",
    "coalesce_days",
    "evaluate_rule",
    "load_rule_file",
    "load_rules_dir",
    "load_shipped_rules",
    "parse_rule",
    "prevalence_stats",
    "serialize_rule",
    "write_prevalence_csv",
]
