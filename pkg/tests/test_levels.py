from __future__ import annotations

import pytest

from medreview.scoring.levels import (
    BinaryCell,
    Level1,
    Level2,
    Level3,
    MisalignedAssessment,
    classify_levels,
)
from medreview.scoring.records import InterventionVerdict

from conftest import make_assessment, make_review


def test_perfect_true_positive_path():
    outcome = classify_levels(make_review(2), make_assessment(2, 0))
    assert outcome.level1 is Level1.IDENTIFIED
    assert outcome.level2 is Level2.ALL_CORRECT
    assert outcome.level3 is Level3.CORRECT
    assert outcome.binary_cell is BinaryCell.TP


def test_false_positive_levels_not_applicable():
    review = make_review(1)
    assessment = make_assessment(0, 1, clinician_flag=False,
                                 intervention_verdict=InterventionVerdict.INCORRECT)
    outcome = classify_levels(review, assessment)
    assert outcome.binary_cell is BinaryCell.FP
    assert outcome.level1 is Level1.NOT_APPLICABLE
    assert outcome.level2 is Level2.NOT_REACHED
    assert outcome.level3 is Level3.NOT_REACHED


def test_false_negative_not_identified():
    review = make_review(0, intervention_required=False)
    assessment = make_assessment(0, 0, missed=1)
    outcome = classify_levels(review, assessment)
    assert outcome.binary_cell is BinaryCell.FN
    assert outcome.level1 is Level1.NOT_IDENTIFIED
    assert outcome.level2 is Level2.NOT_REACHED


def test_true_negative():
    review = make_review(0, intervention_required=False)
    assessment = make_assessment(0, 0, clinician_flag=False,
                                 intervention_verdict=InterventionVerdict.NOT_APPLICABLE)
    outcome = classify_levels(review, assessment)
    assert outcome.binary_cell is BinaryCell.TN
    assert outcome.level1 is Level1.NOT_APPLICABLE


def test_partial_issue_set_gates_level_three():
    outcome = classify_levels(make_review(5), make_assessment(3, 2))
    assert outcome.level2 is Level2.SOME_CORRECT
    assert outcome.level3 is Level3.NOT_REACHED


def test_all_correct_but_missed_is_some_correct():
    outcome = classify_levels(make_review(2), make_assessment(2, 0, missed=1))
    assert outcome.level2 is Level2.SOME_CORRECT
    assert outcome.level3 is Level3.NOT_REACHED


def test_none_correct():
    outcome = classify_levels(make_review(2), make_assessment(0, 2, missed=1))
    assert outcome.level2 is Level2.NONE_CORRECT


@pytest.mark.parametrize("verdict,expected", [
    (InterventionVerdict.CORRECT, Level3.CORRECT),
    (InterventionVerdict.PARTIAL, Level3.PARTIAL),
    (InterventionVerdict.INCORRECT, Level3.INCORRECT),
])
def test_level_three_from_intervention_verdict(verdict, expected):
    outcome = classify_levels(make_review(1),
                              make_assessment(1, 0, intervention_verdict=verdict))
    assert outcome.level3 is expected


def test_gating_invariant_over_grid():
    for n_correct in range(3):
        for n_incorrect in range(3):
            if n_correct + n_incorrect == 0:
                continue
            for missed in range(2):
                for flag in (True, False):
                    outcome = classify_levels(
                        make_review(n_correct + n_incorrect),
                        make_assessment(n_correct, n_incorrect, missed=missed,
                                        clinician_flag=flag),
                    )
                    if outcome.level3 is not Level3.NOT_REACHED:
                        assert outcome.level2 is Level2.ALL_CORRECT
                    if outcome.level2 is not Level2.NOT_REACHED:
                        assert outcome.level1 is Level1.IDENTIFIED


def test_misaligned_verdicts_rejected():
    with pytest.raises(MisalignedAssessment):
        classify_levels(make_review(3), make_assessment(1, 0))
