"""Patient records, code dictionary, synthetic cohorts, and rendering."""

from .codes import CodeDictionary, UnknownCodeSet, load_default_dictionary
from .cohort import (
    CohortManifest,
    CohortSpec,
    DEFAULT_REVIEW_DATE,
    DEFAULT_SINCE,
    PlantSpec,
    VIOLATION_DAYS,
    generate_cohort,
    load_cohort,
    save_cohort,
)
from .models import (
    ClinicalEvent,
    EventKind,
    MedicationInterval,
    PatientProfile,
    Quantity,
    Sex,
    complexity_features,
)
from .render import render_profile

__all__ = [
    "ClinicalEvent",
    "CodeDictionary",
    "CohortManifest",
    "CohortSpec",
    "DEFAULT_REVIEW_DATE",
    "DEFAULT_SINCE",
    "EventKind",
    "MedicationInterval",
    "PatientProfile",
    "PlantSpec",
    "Quantity",
    "Sex",
    "UnknownCodeSet",
    "VIOLATION_DAYS",
    "complexity_features",
    "generate_cohort",
    "load_cohort",
    "load_default_dictionary",
    "render_profile",
    "save_cohort",
]
