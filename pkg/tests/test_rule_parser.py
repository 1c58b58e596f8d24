from __future__ import annotations

from datetime import date

import pytest

from medreview.ehr.codes import UnknownCodeSet
from medreview.indicators.parser import RuleSyntaxError, parse_rule, load_shipped_rules
from medreview.indicators.rules import (
    And,
    MissingCoprescription,
    Not,
    ObservationAbove,
    OnMedication,
    Or,
    serialize_rule,
)

METHOTREXATE_RULE = """\
rule filter_26 "Methotrexate without folic acid"
continuity 14
since 2020-01-01
when ON_MEDICATION(methotrexate) AND MISSING_COPRESCRIPTION(folic_acid, 90)
"""


def test_parse_and_of_two_leaves():
    rule = parse_rule(METHOTREXATE_RULE)
    assert rule.id == "filter_26"
    assert rule.title == "Methotrexate without folic acid"
    assert rule.continuity_min_days == 14
    assert rule.since == date(2020, 1, 1)
    assert rule.condition == And(
        (OnMedication("methotrexate"), MissingCoprescription("folic_acid", 90))
    )


def test_defaults_when_clauses_omitted():
    rule = parse_rule('rule r "t"\nwhen ON_MEDICATION(warfarin)')
    assert rule.continuity_min_days == 14
    assert rule.since == date(2020, 1, 1)


def test_observation_above_with_unit():
    rule = parse_rule('rule r "t"\nwhen OBSERVATION_ABOVE(bmi, 40 kg/m2)')
    assert rule.condition == ObservationAbove("bmi", 40.0, "kg/m2")


def test_operator_precedence_or_loosest():
    rule = parse_rule(
        'rule r "t"\nwhen ON_MEDICATION(a) OR ON_MEDICATION(b) AND NOT HAS_DIAGNOSIS(c)'
    )
    assert isinstance(rule.condition, Or)
    left, right = rule.condition.children
    assert left == OnMedication("a")
    assert isinstance(right, And)
    assert isinstance(right.children[1], Not)


def test_unbalanced_parenthesis_reports_position():
    source = 'rule r "t"\nwhen (ON_MEDICATION(a) AND HAS_DIAGNOSIS(b)'
    with pytest.raises(RuleSyntaxError) as exc:
        parse_rule(source)
    assert exc.value.line == 2
    assert "expected" in str(exc.value)


def test_missing_title_is_a_syntax_error():
    with pytest.raises(RuleSyntaxError, match="quoted rule title"):
        parse_rule("rule r\nwhen ON_MEDICATION(a)")


def test_trailing_input_rejected():
    with pytest.raises(RuleSyntaxError, match="trailing"):
        parse_rule('rule r "t"\nwhen ON_MEDICATION(a) garbage')


def test_unknown_code_set_rejected_with_dictionary(codes):
    with pytest.raises(UnknownCodeSet):
        parse_rule('rule r "t"\nwhen ON_MEDICATION(no_such_set)', codes)


def test_shipped_rules_parse_with_expected_ids(codes):
    rules = load_shipped_rules(codes)
    assert [r.id for r in rules] == [
        "filter_05", "filter_06", "filter_10", "filter_23",
        "filter_26", "filter_28", "filter_33", "filter_55",
    ]


def test_serialize_parse_round_trip(rules):
    for rule in rules:
        again = parse_rule(serialize_rule(rule))
        assert serialize_rule(again) == serialize_rule(rule)
        assert again.condition == rule.condition
        assert again.continuity_min_days == rule.continuity_min_days
        assert again.since == rule.since
