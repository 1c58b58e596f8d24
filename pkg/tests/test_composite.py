from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from medreview.scoring.composite import (
    InsufficientInformation,
    clinician_score,
    f1,
    issue_precision,
    issue_recall,
)
from medreview.scoring.levels import MisalignedAssessment
from medreview.scoring.records import InterventionVerdict

from conftest import make_assessment, make_review

V = InterventionVerdict


def test_precision_counts_correct_over_system_issues():
    assert issue_precision(make_review(5), make_assessment(3, 2)) == 0.6
    with pytest.raises(ZeroDivisionError):
        issue_precision(make_review(0), make_assessment(0, 0))


def test_recall_categories():
    assert issue_recall(make_assessment(2, 0)) == 1.0
    assert issue_recall(make_assessment(1, 1, missed=2)) == 0.5
    assert issue_recall(make_assessment(0, 2, missed=1)) == 0.0


def test_f1_zero_guard():
    assert f1(0.0, 0.0) == 0.0
    assert f1(0.6, 0.5) == pytest.approx(2 * 0.6 * 0.5 / 1.1)


def test_headline_worked_example():
    # 3/5 correct, missed issues present, intervention partial.
    score = clinician_score(make_review(5), make_assessment(3, 2, missed=1,
                                                            intervention_verdict=V.PARTIAL))
    assert score == pytest.approx(0.5227, abs=5e-5)


def test_perfect_and_true_negative_cases():
    assert clinician_score(make_review(2), make_assessment(2, 0)) == 1.0
    tn_review = make_review(0, intervention_required=False)
    tn_assessment = make_assessment(0, 0, clinician_flag=False,
                                    intervention_verdict=V.NOT_APPLICABLE)
    assert clinician_score(tn_review, tn_assessment) == 1.0


def test_no_system_issues_scores_intervention_alone():
    review = make_review(0, intervention_required=False)
    assert clinician_score(review, make_assessment(0, 0, missed=1,
                                                   intervention_verdict=V.PARTIAL)) == 0.5
    assert clinician_score(review, make_assessment(0, 0, missed=1,
                                                   intervention_verdict=V.INCORRECT)) == 0.0


def test_false_positive_scores_zero():
    review = make_review(2)
    assessment = make_assessment(0, 2, clinician_flag=False,
                                 intervention_verdict=V.INCORRECT)
    assert clinician_score(review, assessment) == 0.0


def test_insufficient_information_refused():
    with pytest.raises(InsufficientInformation):
        clinician_score(make_review(1), make_assessment(1, 0, sufficient=False))


def test_misaligned_assessment_refused():
    with pytest.raises(MisalignedAssessment):
        clinician_score(make_review(2), make_assessment(2, 1))


verdict_cases = st.tuples(
    st.integers(0, 4),               # correct
    st.integers(0, 4),               # incorrect
    st.integers(0, 3),               # missed
    st.sampled_from([V.CORRECT, V.PARTIAL, V.INCORRECT]),
)


@given(verdict_cases)
def test_score_bounded(case):
    n_correct, n_incorrect, missed, verdict = case
    score = clinician_score(
        make_review(n_correct + n_incorrect, intervention_required=True),
        make_assessment(n_correct, n_incorrect, missed=missed,
                        intervention_verdict=verdict),
    )
    assert 0.0 <= score <= 1.0


@given(verdict_cases)
def test_flipping_verdict_to_correct_never_decreases(case):
    n_correct, n_incorrect, missed, verdict = case
    if n_incorrect == 0:
        return
    before = clinician_score(
        make_review(n_correct + n_incorrect),
        make_assessment(n_correct, n_incorrect, missed=missed,
                        intervention_verdict=verdict),
    )
    after = clinician_score(
        make_review(n_correct + n_incorrect),
        make_assessment(n_correct + 1, n_incorrect - 1, missed=missed,
                        intervention_verdict=verdict),
    )
    assert after >= before


@given(verdict_cases)
def test_upgrading_intervention_never_decreases(case):
    n_correct, n_incorrect, missed, verdict = case
    ladder = [V.INCORRECT, V.PARTIAL, V.CORRECT]
    rank = ladder.index(verdict)
    if rank == 2:
        return
    review = make_review(n_correct + n_incorrect, intervention_required=True)
    before = clinician_score(review, make_assessment(
        n_correct, n_incorrect, missed=missed, intervention_verdict=verdict))
    after = clinician_score(review, make_assessment(
        n_correct, n_incorrect, missed=missed, intervention_verdict=ladder[rank + 1]))
    assert after >= before
