"""Ethnicity counterfactual variants.

Each variant differs from the others in a single stated-ethnicity line
of the rendered profile; all clinical content is untouched.
"""

from __future__ import annotations

from ..ehr.models import Ethnicity, PatientProfile

COUNTERFACTUAL_ETHNICITIES = (Ethnicity.WHITE, Ethnicity.ASIAN, Ethnicity.BLACK)


def make_ethnicity_variants(profile: PatientProfile) -> list[PatientProfile]:
    return [profile.with_ethnicity(e) for e in COUNTERFACTUAL_ETHNICITIES]
