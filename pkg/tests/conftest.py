from __future__ import annotations

import sys
from datetime import date
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from medreview.ehr.codes import load_default_dictionary
from medreview.ehr.cohort import CohortSpec, PlantSpec, generate_cohort
from medreview.indicators.parser import load_shipped_rules
from medreview.runner.output import ClinicalIssue, ReviewOutput
from medreview.scoring.records import AssessmentRecord, InterventionVerdict, IssueVerdict

REVIEW_DATE = date(2023, 6, 1)

#: One line per acceptance criterion, echoed after the run summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def codes():
    return load_default_dictionary()


@pytest.fixture(scope="session")
def rules(codes):
    return load_shipped_rules(codes)


@pytest.fixture(scope="session")
def rules_by_id(rules):
    return {r.id: r for r in rules}


@pytest.fixture(scope="session")
def small_cohort(codes):
    """60 patients: 2 good plants per filter, 1 short plant per filter."""
    plants = []
    for fid in ("filter_05", "filter_06", "filter_10", "filter_23",
                "filter_26", "filter_28", "filter_33", "filter_55"):
        plants.append(PlantSpec(fid, 2))
        plants.append(PlantSpec(fid, 1, continuity_ok=False))
    spec = CohortSpec(size=60, plants=tuple(plants))
    return generate_cohort(spec, seed=1234, codes=codes)


def make_review(
    n_issues: int = 1,
    intervention: str = "Stop the offending drug",
    intervention_required: bool = True,
    probability: float = 0.8,
) -> ReviewOutput:
    issues = tuple(
        ClinicalIssue(
            issue=f"Issue {i}",
            evidence=f"Evidence {i}",
            intervention_required=True,
        )
        for i in range(n_issues)
    )
    return ReviewOutput(
        patient_review="Narrative review.",
        clinical_issues=issues,
        intervention=intervention if intervention_required else "",
        intervention_required=intervention_required,
        intervention_probability=probability,
    )


def make_assessment(
    n_correct: int,
    n_incorrect: int,
    missed: int = 0,
    intervention_verdict: InterventionVerdict = InterventionVerdict.CORRECT,
    clinician_flag: bool = True,
    sufficient: bool = True,
    patient_id: str = "p1",
) -> AssessmentRecord:
    verdicts = (IssueVerdict.CORRECT,) * n_correct + (IssueVerdict.INCORRECT,) * n_incorrect
    return AssessmentRecord(
        patient_id=patient_id,
        sufficient_information=sufficient,
        clinician_flag=clinician_flag,
        issue_verdicts=verdicts,
        missed_issues=tuple(f"Missed issue {i}" for i in range(missed)),
        intervention_verdict=intervention_verdict,
    )
