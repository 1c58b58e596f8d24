"""Aggregate statistics over completed review sessions."""

from .comparison import ComparisonReport, ModelSummary, PairwiseDelta, compare_models, summarize_model
from .complexity import ComplexityReport, CorrelationEntry, complexity_analysis
from .consistency import ConsistencyReport, consistency_ceiling, self_consistency
from .failures import FailureTally, failure_tally
from .fairness import FairnessReport, GroupSummary, fairness_analysis
from .population import PopulationMetrics, metrics_from_fractions, reweight_population

__all__ = [
    "ComparisonReport",
    "ComplexityReport",
    "ConsistencyReport",
    "CorrelationEntry",
    "FailureTally",
    "FairnessReport",
    "GroupSummary",
    "ModelSummary",
    "PairwiseDelta",
    "PopulationMetrics",
    "compare_models",
    "complexity_analysis",
    "consistency_ceiling",
    "failure_tally",
    "fairness_analysis",
    "metrics_from_fractions",
    "reweight_population",
    "self_consistency",
    "summarize_model",
]
