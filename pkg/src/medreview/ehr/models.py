"""Patient profile data model.

Profiles are longitudinal coded records: demographics plus a date-ordered
stream of clinical events (diagnoses, medications, labs, observations,
hospital episodes, GP contacts, register entries). Profiles are immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Any, Optional


class Sex(str, Enum):
    MALE = "male"
    FEMALE = "female"
    UNKNOWN = "unknown"


class Ethnicity(str, Enum):
    WHITE = "White"
    ASIAN = "Asian"
    BLACK = "Black"
    OTHER = "other"
    UNSTATED = "unstated"


class EventKind(str, Enum):
    DIAGNOSIS = "diagnosis"
    MEDICATION_START = "medication_start"
    MEDICATION_END = "medication_end"
    LAB_RESULT = "lab_result"
    OBSERVATION = "observation"
    HOSPITAL_EPISODE = "hospital_episode"
    GP_EVENT = "gp_event"
    REGISTER_ENTRY = "register_entry"
    REVIEW_NOTE = "review_note"


#: Event kinds that must carry a numeric value.
VALUED_KINDS = {EventKind.LAB_RESULT, EventKind.OBSERVATION}
MEDICATION_KINDS = {EventKind.MEDICATION_START, EventKind.MEDICATION_END}


class ProfileError(ValueError):
    """A profile violates a structural invariant."""


@dataclass(frozen=True)
class Quantity:
    amount: float
    unit: str

    def to_dict(self) -> dict:
        return {"amount": self.amount, "unit": self.unit}

    @classmethod
    def from_dict(cls, d: dict) -> "Quantity":
        return cls(amount=float(d["amount"]), unit=str(d["unit"]))


@dataclass(frozen=True)
class ClinicalEvent:
    date: date
    kind: EventKind
    code: str
    display: str
    value: Optional[Quantity] = None
    dose: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind in VALUED_KINDS and self.value is None:
            raise ProfileError(
                f"{self.kind.value} event on {self.date} must carry a value"
            )

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "date": self.date.isoformat(),
            "kind": self.kind.value,
            "code": self.code,
            "display": self.display,
        }
        if self.value is not None:
            d["value"] = self.value.to_dict()
        if self.dose is not None:
            d["dose"] = self.dose
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ClinicalEvent":
        return cls(
            date=date.fromisoformat(d["date"]),
            kind=EventKind(d["kind"]),
            code=str(d["code"]),
            display=str(d["display"]),
            value=Quantity.from_dict(d["value"]) if d.get("value") else None,
            dose=d.get("dose"),
        )


@dataclass(frozen=True)
class MedicationInterval:
    """A medication exposure derived from paired start/end events.

    Active on day d iff start <= d and (end is None or end > d); the end
    day itself is not counted, avoiding double counting on switch days.
    """

    code: str
    display: str
    start: date
    end: Optional[date]
    dose_text: str = ""

    def __post_init__(self) -> None:
        if self.end is not None and self.end < self.start:
            raise ProfileError(f"interval end {self.end} before start {self.start}")

    def active_on(self, d: date) -> bool:
        return self.start <= d and (self.end is None or self.end > d)


@dataclass(frozen=True)
class ComplexityFeatures:
    age: int
    active_med_count: int
    qof_count: int
    recent_gp_events: int


@dataclass(frozen=True)
class PatientProfile:
    patient_id: str
    birth_year: int
    sex: Sex
    events: tuple[ClinicalEvent, ...] = ()
    ethnicity: Optional[Ethnicity] = None
    imd_decile: Optional[int] = None
    registers: frozenset[str] = frozenset()
    deceased: Optional[date] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "registers", frozenset(self.registers))
        dates = [e.date for e in self.events]
        if any(b > a for a, b in zip(dates[1:], dates)):
            raise ProfileError("events must be sorted non-decreasing by date")
        if self.imd_decile is not None and not 1 <= self.imd_decile <= 10:
            raise ProfileError(f"imd_decile {self.imd_decile} outside 1-10")
        self._check_medication_pairing()

    def _check_medication_pairing(self) -> None:
        open_counts: dict[str, int] = {}
        for e in self.events:
            if e.kind is EventKind.MEDICATION_START:
                open_counts[e.code] = open_counts.get(e.code, 0) + 1
            elif e.kind is EventKind.MEDICATION_END:
                n = open_counts.get(e.code, 0)
                if n == 0:
                    raise ProfileError(
                        f"medication_end for {e.code} on {e.date} has no matching start"
                    )
                open_counts[e.code] = n - 1

    def age_at(self, as_of: date) -> int:
        return as_of.year - self.birth_year

    def medication_intervals(self) -> list[MedicationInterval]:
        """Pair start/end events per code, first-in-first-out."""
        open_stacks: dict[str, list[ClinicalEvent]] = {}
        intervals: list[MedicationInterval] = []
        for e in self.events:
            if e.kind is EventKind.MEDICATION_START:
                open_stacks.setdefault(e.code, []).append(e)
            elif e.kind is EventKind.MEDICATION_END:
                start_ev = open_stacks[e.code].pop(0)
                intervals.append(
                    MedicationInterval(
                        code=e.code,
                        display=start_ev.display,
                        start=start_ev.date,
                        end=e.date,
                        dose_text=start_ev.dose or "",
                    )
                )
        for stack in open_stacks.values():
            for start_ev in stack:
                intervals.append(
                    MedicationInterval(
                        code=start_ev.code,
                        display=start_ev.display,
                        start=start_ev.date,
                        end=None,
                        dose_text=start_ev.dose or "",
                    )
                )
        intervals.sort(key=lambda iv: (iv.start, iv.code))
        return intervals

    def with_ethnicity(self, ethnicity: Optional[Ethnicity]) -> "PatientProfile":
        return PatientProfile(
            patient_id=self.patient_id,
            birth_year=self.birth_year,
            sex=self.sex,
            events=self.events,
            ethnicity=ethnicity,
            imd_decile=self.imd_decile,
            registers=self.registers,
            deceased=self.deceased,
        )

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "patient_id": self.patient_id,
            "birth_year": self.birth_year,
            "sex": self.sex.value,
            "events": [e.to_dict() for e in self.events],
            "registers": sorted(self.registers),
        }
        if self.ethnicity is not None:
            d["ethnicity"] = self.ethnicity.value
        if self.imd_decile is not None:
            d["imd_decile"] = self.imd_decile
        if self.deceased is not None:
            d["deceased"] = self.deceased.isoformat()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PatientProfile":
        return cls(
            patient_id=str(d["patient_id"]),
            birth_year=int(d["birth_year"]),
            sex=Sex(d["sex"]),
            events=tuple(ClinicalEvent.from_dict(e) for e in d.get("events", [])),
            ethnicity=Ethnicity(d["ethnicity"]) if d.get("ethnicity") else None,
            imd_decile=d.get("imd_decile"),
            registers=frozenset(d.get("registers", [])),
            deceased=date.fromisoformat(d["deceased"]) if d.get("deceased") else None,
        )


RECENT_GP_CUTOFF = date(2020, 1, 1)


def complexity_features(profile: PatientProfile, as_of: date) -> ComplexityFeatures:
    """Complexity stratification features at a given date.

    Raises ProfileError if no birth year is available (age unavailable).
    """
    if profile.birth_year is None:  # defensive; dataclass requires it
        raise ProfileError("age unavailable: profile has no birth_year")
    active = sum(1 for iv in profile.medication_intervals() if iv.active_on(as_of))
    recent_gp = sum(
        1
        for e in profile.events
        if e.kind is EventKind.GP_EVENT and RECENT_GP_CUTOFF <= e.date <= as_of
    )
    return ComplexityFeatures(
        age=profile.age_at(as_of),
        active_med_count=active,
        qof_count=len(profile.registers),
        recent_gp_events=recent_gp,
    )
