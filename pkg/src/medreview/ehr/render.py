"""Deterministic markdown rendering of a patient profile.

The rendered document is what the review model sees: a demographics
header, the medication history split into active and past prescriptions
relative to the review date, and a single interleaved chronological list
of clinical events. Identical input yields byte-identical output.
"""

from __future__ import annotations

from datetime import date

from .models import EventKind, MedicationInterval, PatientProfile

_KIND_LABELS = {
    EventKind.DIAGNOSIS: "Diagnosis",
    EventKind.MEDICATION_START: "Medication started",
    EventKind.MEDICATION_END: "Medication stopped",
    EventKind.LAB_RESULT: "Lab result",
    EventKind.OBSERVATION: "Observation",
    EventKind.HOSPITAL_EPISODE: "Hospital episode",
    EventKind.GP_EVENT: "GP contact",
    EventKind.REGISTER_ENTRY: "Register entry",
    EventKind.REVIEW_NOTE: "Review note",
}


def _format_value(amount: float) -> str:
    return f"{amount:g}"


def _medication_line(iv: MedicationInterval) -> str:
    parts = [f"{iv.display} ({iv.code})"]
    if iv.dose_text:
        parts.append(iv.dose_text)
    span = f"started {iv.start.isoformat()}"
    if iv.end is not None:
        span += f", stopped {iv.end.isoformat()}"
    parts.append(span)
    return "- " + "; ".join(parts)


def render_profile(profile: PatientProfile, as_of: date) -> str:
    lines: list[str] = ["# Patient profile", ""]
    lines.append(f"- Patient ID: {profile.patient_id}")
    lines.append(
        f"- Birth year: {profile.birth_year} (age {profile.age_at(as_of)} at review)"
    )
    lines.append(f"- Sex: {profile.sex.value}")
    if profile.ethnicity is not None:
        lines.append(f"- Ethnicity: {profile.ethnicity.value}")
    if profile.imd_decile is not None:
        lines.append(f"- IMD decile: {profile.imd_decile}")
    if profile.registers:
        lines.append(f"- QoF registers: {', '.join(sorted(profile.registers))}")
    if profile.deceased is not None:
        lines.append(f"- Deceased: {profile.deceased.isoformat()}")
    lines.append(f"- Review date: {as_of.isoformat()}")

    intervals = profile.medication_intervals()
    if intervals:
        active = [iv for iv in intervals if iv.active_on(as_of)]
        past = [iv for iv in intervals if not iv.active_on(as_of)]
        lines += ["", "## Medications"]
        if active:
            lines += ["", "### Active prescriptions", ""]
            lines += [_medication_line(iv) for iv in active]
        if past:
            lines += ["", "### Past prescriptions", ""]
            lines += [_medication_line(iv) for iv in past]

    if profile.events:
        lines += ["", "## Clinical events", ""]
        for e in profile.events:
            label = _KIND_LABELS[e.kind]
            line = f"- {e.date.isoformat()} [{label}] {e.display} ({e.code})"
            if e.value is not None:
                line += f": {_format_value(e.value.amount)} {e.value.unit}"
            if e.dose is not None:
                line += f"; dose: {e.dose}"
            lines.append(line)

    return "\n".join(lines) + "\n"
