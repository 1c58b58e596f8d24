"""Repeated-epoch review execution with retries and persistence.

Each epoch is one independent completion. Transport errors and
malformed completions are retried up to the configured limit; raw text
for every attempt is kept so failures are always auditable.
"""

from __future__ import annotations

import datetime as _dt
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date
from typing import Optional

import httpx

from ..ehr.models import PatientProfile
from ..ehr.render import render_profile
from .client import ChatEndpoint, EndpointUnavailable, ModelConfig
from .output import MalformedOutput, OutputError, ReviewOutput, parse_review_output, strip_code_fence
from .prompt import build_prompt, system_prompt_checksum


@dataclass
class EpochRecord:
    epoch: int
    raw_text: str
    retries: int
    fenced: bool


@dataclass
class RunMetadata:
    patient_id: str
    model_name: str
    seed_tag: str
    prompt_checksum: str
    started_at: str
    finished_at: str = ""
    epochs: list[EpochRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "patient_id": self.patient_id,
            "model_name": self.model_name,
            "seed_tag": self.seed_tag,
            "prompt_checksum": self.prompt_checksum,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "epochs": [
                {
                    "epoch": e.epoch,
                    "raw_text": e.raw_text,
                    "retries": e.retries,
                    "fenced": e.fenced,
                }
                for e in self.epochs
            ],
        }


class AllEpochsMalformed(RuntimeError):
    pass


def _one_epoch(
    endpoint: ChatEndpoint, messages: list[dict], max_retries: int
) -> tuple[ReviewOutput, str, int]:
    attempts = 0
    last_error: Exception | None = None
    while attempts <= max_retries:
        try:
            raw = endpoint.complete(messages)
        except httpx.HTTPError as e:
            last_error = e
            attempts += 1
            continue
        try:
            return parse_review_output(raw), raw, attempts
        except MalformedOutput as e:
            last_error = e
            attempts += 1
        except OutputError:
            raise  # schema/range problems are not transient; surface them
    if isinstance(last_error, httpx.HTTPError):
        raise EndpointUnavailable(f"endpoint failed after {attempts} attempts: {last_error}")
    raise AllEpochsMalformed(f"no parseable completion after {attempts} attempts")


def run_review(
    profile: PatientProfile,
    cfg: ModelConfig,
    epochs: int,
    seed_tag: str,
    as_of: date,
    parallelism: int = 1,
    store=None,
    session_id: Optional[str] = None,
) -> tuple[list[ReviewOutput], RunMetadata]:
    """Run `epochs` independent reviews of one patient.

    When a store and session are given, raw results are persisted before
    returning, so no successful completion is ever lost.
    """
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    profile_text = render_profile(profile, as_of)
    messages = build_prompt(profile_text)
    endpoint = ChatEndpoint(cfg)
    meta = RunMetadata(
        patient_id=profile.patient_id,
        model_name=cfg.model_name,
        seed_tag=seed_tag,
        prompt_checksum=system_prompt_checksum(),
        started_at=_dt.datetime.now(_dt.timezone.utc).isoformat(),
    )

    def worker(i: int):
        output, raw, retries = _one_epoch(endpoint, messages, cfg.max_retries)
        _, fenced = strip_code_fence(raw)
        return i, output, EpochRecord(epoch=i, raw_text=raw, retries=retries, fenced=fenced)

    results: list[tuple[int, ReviewOutput, EpochRecord]] = []
    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(worker, range(epochs)))
    else:
        results = [worker(i) for i in range(epochs)]

    results.sort(key=lambda t: t[0])
    outputs = [out for _, out, _ in results]
    meta.epochs = [rec for _, _, rec in results]
    meta.finished_at = _dt.datetime.now(_dt.timezone.utc).isoformat()

    if store is not None and session_id is not None:
        store.save_review(session_id, profile.patient_id, outputs, meta)
    return outputs, meta
