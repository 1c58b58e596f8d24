from __future__ import annotations

from datetime import date

from medreview.ehr.models import (
    ClinicalEvent,
    EventKind,
    Ethnicity,
    PatientProfile,
    Quantity,
    Sex,
)
from medreview.ehr.render import render_profile

AS_OF = date(2023, 6, 1)


def _profile(**overrides) -> PatientProfile:
    events = (
        ClinicalEvent(date(2020, 5, 1), EventKind.DIAGNOSIS, "38341003", "Hypertension"),
        ClinicalEvent(
            date(2021, 1, 10), EventKind.MEDICATION_START, "318501",
            "Methotrexate 2.5mg tablets", dose="2.5mg weekly",
        ),
        ClinicalEvent(
            date(2021, 8, 2), EventKind.LAB_RESULT, "905002", "ALT level",
            value=Quantity(31.0, "U/L"),
        ),
        ClinicalEvent(date(2022, 3, 4), EventKind.MEDICATION_END, "318501",
                      "Methotrexate 2.5mg tablets"),
    )
    base = dict(
        patient_id="p042", birth_year=1948, sex=Sex.FEMALE, events=events,
        imd_decile=3, registers=frozenset({"hypertension"}),
    )
    base.update(overrides)
    return PatientProfile(**base)


def test_header_fields_present():
    text = render_profile(_profile(), AS_OF)
    assert text.startswith("# Patient profile\n")
    assert "- Patient ID: p042" in text
    assert "- Birth year: 1948 (age 75 at review)" in text
    assert "- Sex: female" in text
    assert "- IMD decile: 3" in text
    assert "- QoF registers: hypertension" in text
    assert "- Review date: 2023-06-01" in text


def test_ethnicity_line_only_when_set():
    assert "Ethnicity" not in render_profile(_profile(), AS_OF)
    text = render_profile(_profile(ethnicity=Ethnicity.ASIAN), AS_OF)
    assert "- Ethnicity: Asian" in text


def test_medication_sections_split_by_review_date():
    text = render_profile(_profile(), AS_OF)
    # Course ended before the review date, so it is a past prescription.
    assert "### Past prescriptions" in text
    assert "### Active prescriptions" not in text
    assert "Methotrexate 2.5mg tablets (318501); 2.5mg weekly; " \
           "started 2021-01-10, stopped 2022-03-04" in text


def test_event_lines_chronological_with_values():
    text = render_profile(_profile(), AS_OF)
    events_part = text.split("## Clinical events")[1]
    lines = [l for l in events_part.splitlines() if l.startswith("- ")]
    assert lines[0].startswith("- 2020-05-01 [Diagnosis] Hypertension (38341003)")
    assert "- 2021-08-02 [Lab result] ALT level (905002): 31 U/L" in lines
    dates = [l[2:12] for l in lines]
    assert dates == sorted(dates)


def test_rendering_is_deterministic():
    a = render_profile(_profile(), AS_OF)
    b = render_profile(_profile(), AS_OF)
    assert a == b
