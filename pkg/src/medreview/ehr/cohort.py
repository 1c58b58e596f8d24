"""Synthetic cohort generator with plantable indicator scenarios.

Planted patients carry a coded pattern that a named prescribing-safety
indicator should match (or, for continuity-violating plants, match for
fewer days than the continuity rule requires). Every other patient is
built exclusively from "safe" codes that belong to no indicator code
set, so a correct engine matches exactly the manifest.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import date, timedelta

from .codes import CodeDictionary, load_default_dictionary
from .models import ClinicalEvent, EventKind, PatientProfile, Quantity, Sex

DEFAULT_SINCE = date(2020, 1, 1)
DEFAULT_REVIEW_DATE = date(2023, 6, 1)

#: Duration (days) of a planted pattern that must fail the 14-day rule.
VIOLATION_DAYS = 13

SAFE_REGISTERS = (
    "hypertension",
    "diabetes",
    "ckd",
    "chd",
    "copd",
    "mental_health",
    "stroke_tia",
    "obesity",
)

_SAFE_DIAGNOSES = (
    "38341003",
    "44054006",
    "40930008",
    "35489007",
    "396275006",
    "13645005",
    "709044004",
    "235595009",
)
_SAFE_MEDS = tuple(f"3190{i:02d}" for i in range(1, 11))
_SAFE_LABS = ("905101", "905102", "905103", "905104", "905105")
_GP_CODES = ("183452005", "185345009")


@dataclass(frozen=True)
class PlantSpec:
    indicator_id: str
    count: int
    continuity_ok: bool = True


@dataclass(frozen=True)
class CohortSpec:
    size: int
    plants: tuple[PlantSpec, ...] = ()
    since: date = DEFAULT_SINCE
    review_date: date = DEFAULT_REVIEW_DATE

    def __post_init__(self) -> None:
        object.__setattr__(self, "plants", tuple(self.plants))


@dataclass
class PlantRecord:
    indicator_id: str
    continuity_ok: bool
    start: date
    days: int

    def to_dict(self) -> dict:
        return {
            "indicator_id": self.indicator_id,
            "continuity_ok": self.continuity_ok,
            "start": self.start.isoformat(),
            "days": self.days,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlantRecord":
        return cls(
            indicator_id=d["indicator_id"],
            continuity_ok=bool(d["continuity_ok"]),
            start=date.fromisoformat(d["start"]),
            days=int(d["days"]),
        )


@dataclass
class CohortManifest:
    """Sidecar record of which patients carry which planted scenario."""

    plants: dict[str, PlantRecord] = field(default_factory=dict)

    def patients_for(self, indicator_id: str, continuity_ok: bool | None = None):
        return sorted(
            pid
            for pid, rec in self.plants.items()
            if rec.indicator_id == indicator_id
            and (continuity_ok is None or rec.continuity_ok == continuity_ok)
        )

    def to_dict(self) -> dict:
        return {"plants": {pid: rec.to_dict() for pid, rec in sorted(self.plants.items())}}

    @classmethod
    def from_dict(cls, d: dict) -> "CohortManifest":
        return cls(
            plants={pid: PlantRecord.from_dict(rec) for pid, rec in d["plants"].items()}
        )


class _PatientBuilder:
    def __init__(self, rng: random.Random, spec: CohortSpec):
        self.rng = rng
        self.spec = spec
        self.events: list[tuple[date, int, ClinicalEvent]] = []
        self._seq = 0

    def add(self, event: ClinicalEvent) -> None:
        self.events.append((event.date, self._seq, event))
        self._seq += 1

    def random_date(self, lo: date, hi: date) -> date:
        span = (hi - lo).days
        return lo + timedelta(days=self.rng.randrange(span + 1))

    def add_medication(self, code: str, display: str, start: date,
                       end: date | None, dose: str = "") -> None:
        self.add(ClinicalEvent(start, EventKind.MEDICATION_START, code, display,
                               dose=dose or None))
        if end is not None:
            self.add(ClinicalEvent(end, EventKind.MEDICATION_END, code, display))

    def sorted_events(self) -> tuple[ClinicalEvent, ...]:
        # Same-day start/end pairs keep insertion order so starts precede ends.
        def key(item):
            d, seq, ev = item
            return (d, 0 if ev.kind is not EventKind.MEDICATION_END else 1, seq)

        return tuple(ev for _, _, ev in sorted(self.events, key=key))


def _plant_window(b: _PatientBuilder, days: int) -> tuple[date, date]:
    lo = b.spec.since + timedelta(days=60)
    hi = b.spec.review_date - timedelta(days=days + 60)
    start = b.random_date(lo, hi)
    return start, start + timedelta(days=days)


def _pick(b: _PatientBuilder, codes: CodeDictionary, set_name: str) -> tuple[str, str]:
    code = b.rng.choice(sorted(codes.resolve_set(set_name)))
    return code, codes.display(code)


def _plant_med_plus_diagnosis(b, codes, med_set, dx_set, days):
    start, end = _plant_window(b, days)
    dx_code, dx_display = _pick(b, codes, dx_set)
    dx_date = b.random_date(date(2015, 1, 1), start - timedelta(days=30))
    b.add(ClinicalEvent(dx_date, EventKind.DIAGNOSIS, dx_code, dx_display))
    med_code, med_display = _pick(b, codes, med_set)
    b.add_medication(med_code, med_display, start, end, dose="once daily")
    return start, days


def _plant_filter_05(b, codes, days):
    return _plant_med_plus_diagnosis(b, codes, "rate_limiting_ccb", "heart_failure", days)


def _plant_filter_06(b, codes, days):
    return _plant_med_plus_diagnosis(b, codes, "beta_blocker", "asthma", days)


def _plant_filter_10(b, codes, days):
    return _plant_med_plus_diagnosis(b, codes, "antipsychotic", "dementia", days)


def _plant_filter_23(b, codes, days):
    start, end = _plant_window(b, days)
    med_code, med_display = _pick(b, codes, "combined_hormonal_contraceptive")
    b.add_medication(med_code, med_display, start, end, dose="one tablet daily")
    bmi = round(b.rng.uniform(40.5, 46.0), 1)
    b.add(ClinicalEvent(start, EventKind.OBSERVATION, "60621009",
                        codes.display("60621009"), value=Quantity(bmi, "kg/m2")))
    return start, days


def _plant_filter_26(b, codes, days):
    # Methotrexate with no folic acid; LFTs kept current so only filter 26 fires.
    start, end = _plant_window(b, days)
    med_code, med_display = _pick(b, codes, "methotrexate")
    b.add_medication(med_code, med_display, start, end, dose="2.5mg weekly")
    lft = start - timedelta(days=5)
    while lft < end + timedelta(days=5):
        b.add(ClinicalEvent(lft, EventKind.LAB_RESULT, "905002",
                            codes.display("905002"),
                            value=Quantity(round(b.rng.uniform(15, 45), 0), "U/L")))
        lft += timedelta(days=80)
    return start, days


def _plant_filter_28(b, codes, days):
    return _plant_med_plus_diagnosis(b, codes, "nsaid", "peptic_ulcer", days)


def _plant_filter_33(b, codes, days):
    start, end = _plant_window(b, days)
    b.add_medication("318801", codes.display("318801"),
                     start - timedelta(days=45), end + timedelta(days=45),
                     dose="as directed")
    abx_code, abx_display = _pick(b, codes, "antibiotic")
    b.add_medication(abx_code, abx_display, start, end, dose="twice daily")
    return start, days


def _plant_filter_55(b, codes, days):
    # Methotrexate with folic acid cover but no liver monitoring at all.
    start, end = _plant_window(b, days)
    med_code, med_display = _pick(b, codes, "methotrexate")
    b.add_medication(med_code, med_display, start, end, dose="2.5mg weekly")
    b.add_medication("318601", codes.display("318601"),
                     start - timedelta(days=7), end + timedelta(days=7),
                     dose="5mg weekly")
    return start, days


_PLANTERS = {
    "filter_05": _plant_filter_05,
    "filter_06": _plant_filter_06,
    "filter_10": _plant_filter_10,
    "filter_23": _plant_filter_23,
    "filter_26": _plant_filter_26,
    "filter_28": _plant_filter_28,
    "filter_33": _plant_filter_33,
    "filter_55": _plant_filter_55,
}

PLANTABLE_INDICATORS = tuple(sorted(_PLANTERS))

# Plants for the methotrexate filters must not add background events that
# interact with monitoring/co-prescription windows of the other one.
_NO_BACKGROUND_BMI = {"filter_23"}
_NO_BACKGROUND_LABS = {"filter_55"}


def _background(b: _PatientBuilder, codes: CodeDictionary, plant: PlantRecord | None) -> None:
    rng = b.rng
    lo, hi = date(2016, 1, 1), b.spec.review_date

    for _ in range(rng.randrange(2, 12)):
        code = rng.choice(_GP_CODES)
        b.add(ClinicalEvent(b.random_date(lo, hi), EventKind.GP_EVENT, code,
                            codes.display(code)))
    for code in rng.sample(_SAFE_DIAGNOSES, rng.randrange(0, 4)):
        b.add(ClinicalEvent(b.random_date(lo, hi), EventKind.DIAGNOSIS, code,
                            codes.display(code)))
    for code in rng.sample(_SAFE_MEDS, rng.randrange(0, 5)):
        start = b.random_date(lo, hi - timedelta(days=30))
        end = None
        if rng.random() < 0.4:
            end = start + timedelta(days=rng.randrange(30, 700))
            if end >= hi:
                end = None
        b.add_medication(code, codes.display(code), start, end, dose="once daily")
    if plant is None or plant.indicator_id not in _NO_BACKGROUND_LABS:
        for _ in range(rng.randrange(0, 4)):
            code = rng.choice(_SAFE_LABS)
            b.add(ClinicalEvent(b.random_date(lo, hi), EventKind.LAB_RESULT, code,
                                codes.display(code),
                                value=Quantity(round(rng.uniform(1, 120), 1), "unit")))
    if plant is None or plant.indicator_id not in _NO_BACKGROUND_BMI:
        if rng.random() < 0.5:
            b.add(ClinicalEvent(b.random_date(lo, hi), EventKind.OBSERVATION,
                                "60621009", codes.display("60621009"),
                                value=Quantity(round(rng.uniform(19, 34), 1), "kg/m2")))
    if rng.random() < 0.6:
        b.add(ClinicalEvent(b.random_date(lo, hi), EventKind.OBSERVATION,
                            "271649006", codes.display("271649006"),
                            value=Quantity(float(rng.randrange(100, 175)), "mmHg")))
    if rng.random() < 0.2:
        b.add(ClinicalEvent(b.random_date(lo, hi), EventKind.HOSPITAL_EPISODE,
                            "32485007", codes.display("32485007")))


def generate_cohort(
    spec: CohortSpec,
    seed: int,
    codes: CodeDictionary | None = None,
) -> tuple[list[PatientProfile], CohortManifest]:
    """Build a deterministic synthetic cohort plus its plant manifest."""
    codes = codes or load_default_dictionary()

    total_plants = sum(p.count for p in spec.plants)
    if total_plants > spec.size:
        raise ValueError(
            f"planted count {total_plants} exceeds cohort size {spec.size}"
        )
    for p in spec.plants:
        if p.indicator_id not in _PLANTERS:
            raise ValueError(f"unknown indicator id {p.indicator_id!r}")

    rng = random.Random(seed)
    assignments: list[PlantSpec | None] = []
    for p in spec.plants:
        assignments += [p] * p.count
    assignments += [None] * (spec.size - total_plants)
    rng.shuffle(assignments)

    profiles: list[PatientProfile] = []
    manifest = CohortManifest()
    for i, assigned in enumerate(assignments):
        pid = f"p{i:05d}"
        patient_rng = random.Random(rng.randrange(2**63))
        b = _PatientBuilder(patient_rng, spec)

        plant_record: PlantRecord | None = None
        if assigned is not None:
            days = (
                patient_rng.randrange(30, 180)
                if assigned.continuity_ok
                else VIOLATION_DAYS
            )
            start, days = _PLANTERS[assigned.indicator_id](b, codes, days)
            plant_record = PlantRecord(
                indicator_id=assigned.indicator_id,
                continuity_ok=assigned.continuity_ok,
                start=start,
                days=days,
            )
            manifest.plants[pid] = plant_record

        _background(b, codes, plant_record)

        profiles.append(
            PatientProfile(
                patient_id=pid,
                birth_year=spec.review_date.year - patient_rng.randrange(18, 90),
                sex=patient_rng.choice([Sex.MALE, Sex.FEMALE]),
                events=b.sorted_events(),
                imd_decile=patient_rng.randrange(1, 11),
                registers=frozenset(
                    patient_rng.sample(SAFE_REGISTERS, patient_rng.randrange(0, 6))
                ),
            )
        )
    return profiles, manifest


def save_cohort(profiles: list[PatientProfile], manifest: CohortManifest, path) -> None:
    """Persist a cohort as one JSON document per patient plus a manifest."""
    import os

    os.makedirs(path, exist_ok=True)
    patients_dir = os.path.join(path, "patients")
    os.makedirs(patients_dir, exist_ok=True)
    for p in profiles:
        with open(os.path.join(patients_dir, f"{p.patient_id}.json"), "w") as f:
            json.dump(p.to_dict(), f, indent=2, sort_keys=True)
    with open(os.path.join(path, "manifest.json"), "w") as f:
        json.dump(manifest.to_dict(), f, indent=2, sort_keys=True)


def load_cohort(path) -> tuple[list[PatientProfile], CohortManifest]:
    import os

    patients_dir = os.path.join(path, "patients")
    profiles = []
    for name in sorted(os.listdir(patients_dir)):
        with open(os.path.join(patients_dir, name)) as f:
            profiles.append(PatientProfile.from_dict(json.load(f)))
    with open(os.path.join(path, "manifest.json")) as f:
        manifest = CohortManifest.from_dict(json.load(f))
    return profiles, manifest
