"""Evaluation harness for LLM-drafted structured medication reviews.

Subpackages:

- ehr: patient record model, synthetic cohorts, markdown rendering
- indicators: prescribing-safety rule DSL and temporal evaluation engine
- runner: prompting, endpoint client, output parsing, case sampling
- scoring: clinician and automated scoring, hierarchical levels, metrics
- analysis: consistency, population reweighting, comparisons, fairness
- store: local JSON persistence of sessions, reviews, and assessments
"""

__version__ = "0.1.0"
