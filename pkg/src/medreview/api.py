"""HTTP API for the clinician grading interface.

Session-scoped JSON API under /v1, designed to run unauthenticated on
localhost. Every mutation maps to exactly one store operation, so a
rejected request never leaves partial state behind. Errors are always
{code, message}: 404 for unknown ids, 409 for status-transition
conflicts, 422 for schema problems.
"""

from __future__ import annotations

from datetime import date
from typing import Mapping

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .ehr.models import PatientProfile
from .ehr.render import render_profile
from .scoring.records import AssessmentRecord
from .store import (
    InvalidTransition,
    ReviewNotFound,
    SessionNotFound,
    Store,
    UnknownPatient,
)


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(
    store: Store,
    session_id: str,
    profiles: Mapping[str, PatientProfile],
    as_of: date,
) -> FastAPI:
    app = FastAPI(title="medreview grading API", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return _error(422, "schema_violation", str(exc.errors()))

    @app.exception_handler(UnknownPatient)
    async def _unknown_patient(request: Request, exc: UnknownPatient):
        return _error(404, "unknown_patient", f"unknown patient {exc.args[0]}")

    @app.exception_handler(SessionNotFound)
    async def _no_session(request: Request, exc: SessionNotFound):
        return _error(404, "unknown_session", str(exc))

    @app.exception_handler(InvalidTransition)
    async def _bad_transition(request: Request, exc: InvalidTransition):
        return _error(409, "invalid_transition", str(exc))

    def _check_session(sid: str) -> None:
        if sid != session_id:
            raise SessionNotFound(f"session {sid} is not served here")

    @app.get("/v1/sessions/{sid}/next")
    def next_patient(sid: str):
        _check_session(sid)
        pid = store.next_gradable(session_id)
        if pid is None:
            return Response(status_code=204)
        return {"patient_id": pid}

    @app.get("/v1/sessions/{sid}/progress")
    def progress(sid: str):
        _check_session(sid)
        return store.progress(session_id)

    @app.get("/v1/patients/{pid}/profile")
    def patient_profile(pid: str):
        store.load_session(session_id).status_of(pid)
        profile = profiles.get(pid)
        if profile is None:
            raise UnknownPatient(pid)
        return {
            "patient_id": pid,
            "markdown": render_profile(profile, as_of),
            "profile": profile.to_dict(),
        }

    @app.get("/v1/patients/{pid}/review")
    def patient_review(pid: str):
        store.load_session(session_id).status_of(pid)
        try:
            outputs, metadata = store.load_review(session_id, pid)
        except ReviewNotFound as e:
            return _error(404, "review_not_found", str(e))
        return {
            "patient_id": pid,
            "review": outputs[0].to_dict(),
            "epoch_count": len(outputs),
            "model_name": metadata.get("model_name", ""),
        }

    @app.post("/v1/patients/{pid}/sufficiency")
    def sufficiency(pid: str, body: dict):
        if "sufficient" not in body or not isinstance(body["sufficient"], bool):
            return _error(422, "schema_violation", "body must be {sufficient: bool}")
        record = store.mark_sufficiency(session_id, pid, body["sufficient"])
        return {"patient_id": pid, "status": record.status_of(pid).value}

    @app.post("/v1/patients/{pid}/assessment")
    def assessment(pid: str, body: dict):
        try:
            record = AssessmentRecord.from_dict({**body, "patient_id": pid})
        except (KeyError, ValueError, TypeError) as e:
            return _error(422, "schema_violation", f"invalid assessment record: {e}")
        try:
            outputs, _ = store.load_review(session_id, pid)
        except ReviewNotFound as e:
            return _error(404, "review_not_found", str(e))
        if record.sufficient_information and len(record.issue_verdicts) != len(
            outputs[0].clinical_issues
        ):
            raise_msg = (
                f"{len(record.issue_verdicts)} verdicts for "
                f"{len(outputs[0].clinical_issues)} reviewed issues"
            )
            return _error(422, "schema_violation", raise_msg)
        session = store.append_assessment(session_id, pid, record)
        return {"patient_id": pid, "status": session.status_of(pid).value}

    return app


def serve(app: FastAPI, host: str = "127.0.0.1", port: int = 8400) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
