"""System prompt asset and message assembly.

The prompt ships as a vendored asset with a recorded checksum so runs
can verify they are using the exact reviewed text.
"""

from __future__ import annotations

import hashlib
from importlib import resources

#: SHA-256 of the vendored prompt asset, recorded at vendoring time.
SYSTEM_PROMPT_SHA256 = "088e8a4edd068af3a8314a43296c5e5664cba7f542758b81303bdf9c27682501"


def load_system_prompt() -> str:
    return resources.files("medreview.data").joinpath("system_prompt.md").read_text()


def system_prompt_checksum() -> str:
    return hashlib.sha256(load_system_prompt().encode("utf-8")).hexdigest()


def verify_system_prompt() -> None:
    actual = system_prompt_checksum()
    if actual != SYSTEM_PROMPT_SHA256:
        raise RuntimeError(
            f"system prompt asset checksum mismatch: {actual} != {SYSTEM_PROMPT_SHA256}"
        )


def build_prompt(profile_text: str) -> list[dict]:
    """Two messages: the verbatim system prompt, then the rendered profile."""
    if not profile_text:
        raise ValueError("profile_text must be non-empty")
    return [
        {"role": "system", "content": load_system_prompt()},
        {"role": "user", "content": profile_text},
    ]
