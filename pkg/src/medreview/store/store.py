"""Directory-tree JSON store with atomic writes and a per-session lock.

Layout under the store root:

    sessions/<id>/session.json
    sessions/<id>/reviews/<patient>.json
    sessions/<id>/assessments/<patient>/<version>.json
    sessions/<id>/reports/

Every write goes to a temporary file in the target directory and is
moved into place with os.replace, so a crash leaves either the old or
the new version, never a torn file. Mutations take a lock file; a
second concurrent writer is rejected rather than queued.
"""

from __future__ import annotations

import contextlib
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional, Sequence

from ..runner.output import ReviewOutput, parse_review_output
from ..runner.sampling import EvaluationSet
from ..scoring.levels import classify_levels
from ..scoring.records import AssessmentRecord
from .session import PatientStatus, SessionRecord, UnknownPatient


class SessionExists(FileExistsError):
    pass


class SessionNotFound(FileNotFoundError):
    pass


class ReviewNotFound(FileNotFoundError):
    pass


class ConcurrentWriter(RuntimeError):
    """Another writer holds this session's lock."""


class EmptySessionReport(ValueError):
    """Report export needs at least one assessed patient."""


def _atomic_write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    data = json.dumps(payload, indent=2, sort_keys=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(data)
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _read_json(path: Path) -> dict:
    with open(path) as f:
        return json.load(f)


class Store:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.sessions_dir = self.root / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)

    # -- paths -------------------------------------------------------------

    def _session_dir(self, session_id: str) -> Path:
        return self.sessions_dir / session_id

    def _session_path(self, session_id: str) -> Path:
        return self._session_dir(session_id) / "session.json"

    def _review_path(self, session_id: str, patient_id: str) -> Path:
        return self._session_dir(session_id) / "reviews" / f"{patient_id}.json"

    def _assessment_dir(self, session_id: str, patient_id: str) -> Path:
        return self._session_dir(session_id) / "assessments" / patient_id

    # -- locking -----------------------------------------------------------

    @contextlib.contextmanager
    def writer_lock(self, session_id: str) -> Iterator[None]:
        lock = self._session_dir(session_id) / ".lock"
        lock.parent.mkdir(parents=True, exist_ok=True)
        try:
            fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise ConcurrentWriter(
                f"session {session_id} is locked by another writer"
            ) from None
        try:
            os.write(fd, str(os.getpid()).encode())
            os.close(fd)
            yield
        finally:
            with contextlib.suppress(OSError):
                os.unlink(lock)

    # -- session lifecycle -------------------------------------------------

    def create_session(
        self,
        session_id: str,
        cohort_ref: str,
        evaluation_set: EvaluationSet,
        model_configs: Optional[list[dict]] = None,
    ) -> SessionRecord:
        path = self._session_path(session_id)
        if path.exists():
            raise SessionExists(f"session {session_id} already exists")
        record = SessionRecord.new(
            session_id=session_id,
            created_at=datetime.now(timezone.utc).isoformat(),
            cohort_ref=cohort_ref,
            evaluation_set=evaluation_set,
            model_configs=model_configs,
        )
        with self.writer_lock(session_id):
            _atomic_write_json(path, record.to_dict())
        return record

    def load_session(self, session_id: str) -> SessionRecord:
        path = self._session_path(session_id)
        if not path.exists():
            raise SessionNotFound(f"session {session_id} not found")
        return SessionRecord.from_dict(_read_json(path))

    def _save_session(self, record: SessionRecord) -> None:
        _atomic_write_json(self._session_path(record.session_id), record.to_dict())

    # -- reviews -----------------------------------------------------------

    def save_review(
        self,
        session_id: str,
        patient_id: str,
        outputs: Sequence[ReviewOutput],
        metadata,
    ) -> SessionRecord:
        with self.writer_lock(session_id):
            record = self.load_session(session_id)
            record.transition(patient_id, PatientStatus.REVIEWED)
            meta_dict = metadata.to_dict() if hasattr(metadata, "to_dict") else dict(metadata)
            _atomic_write_json(
                self._review_path(session_id, patient_id),
                {
                    "patient_id": patient_id,
                    "outputs": [o.to_dict() for o in outputs],
                    "metadata": meta_dict,
                },
            )
            self._save_session(record)
        return record

    def load_review(
        self, session_id: str, patient_id: str
    ) -> tuple[list[ReviewOutput], dict]:
        path = self._review_path(session_id, patient_id)
        if not path.exists():
            raise ReviewNotFound(f"no review stored for patient {patient_id}")
        doc = _read_json(path)
        outputs = [parse_review_output(json.dumps(o)) for o in doc["outputs"]]
        return outputs, doc["metadata"]

    # -- sufficiency and assessments ----------------------------------------

    def mark_sufficiency(
        self, session_id: str, patient_id: str, sufficient: bool
    ) -> SessionRecord:
        with self.writer_lock(session_id):
            record = self.load_session(session_id)
            if sufficient:
                # Confirming sufficiency keeps the current status; the
                # guard still rejects unknown patients.
                record.status_of(patient_id)
            else:
                record.transition(patient_id, PatientStatus.EXCLUDED_INSUFFICIENT)
            self._save_session(record)
        return record

    def append_assessment(
        self, session_id: str, patient_id: str, assessment: AssessmentRecord
    ) -> SessionRecord:
        with self.writer_lock(session_id):
            record = self.load_session(session_id)
            target = (
                PatientStatus.ASSESSED
                if assessment.sufficient_information
                else PatientStatus.EXCLUDED_INSUFFICIENT
            )
            record.transition(patient_id, target)
            adir = self._assessment_dir(session_id, patient_id)
            version = len(self._assessment_versions(adir)) + 1
            _atomic_write_json(adir / f"{version}.json", assessment.to_dict())
            self._save_session(record)
        return record

    @staticmethod
    def _assessment_versions(adir: Path) -> list[Path]:
        if not adir.is_dir():
            return []
        return sorted(adir.glob("*.json"), key=lambda p: int(p.stem))

    def load_assessments(self, session_id: str, patient_id: str) -> list[AssessmentRecord]:
        paths = self._assessment_versions(self._assessment_dir(session_id, patient_id))
        return [AssessmentRecord.from_dict(_read_json(p)) for p in paths]

    def latest_assessment(self, session_id: str, patient_id: str) -> Optional[AssessmentRecord]:
        records = self.load_assessments(session_id, patient_id)
        return records[-1] if records else None

    # -- queries -----------------------------------------------------------

    def next_gradable(self, session_id: str) -> Optional[str]:
        """First reviewed patient awaiting clinician assessment."""
        record = self.load_session(session_id)
        for pid, status in record.status.items():
            if status is PatientStatus.REVIEWED:
                return pid
        return None

    def progress(self, session_id: str) -> dict[str, int]:
        return self.load_session(session_id).counts()

    # -- report export ------------------------------------------------------

    def export_report(self, session_id: str) -> Path:
        """Write a deterministic report bundle; returns the bundle directory.

        Re-exporting an unchanged session produces byte-identical files.
        """
        record = self.load_session(session_id)
        assessed = [
            pid for pid, s in record.status.items() if s is PatientStatus.ASSESSED
        ]
        if not assessed:
            raise EmptySessionReport(
                f"session {session_id} has no assessed patients to report"
            )

        reports = self._session_dir(session_id) / "reports"
        reports.mkdir(parents=True, exist_ok=True)

        lines = ["patient_id,status"]
        lines += [f"{pid},{record.status[pid].value}" for pid in sorted(record.status)]
        cohort_csv = reports / "cohort.csv"
        cohort_csv.write_text("\n".join(lines) + "\n")

        level_counts: dict[str, dict[str, int]] = {
            "level1": {},
            "level2": {},
            "level3": {},
            "binary_cell": {},
        }
        per_patient: dict[str, dict] = {}
        for pid in sorted(assessed):
            outputs, _meta = self.load_review(session_id, pid)
            assessment = self.latest_assessment(session_id, pid)
            assert assessment is not None
            outcome = classify_levels(outputs[0], assessment)
            per_patient[pid] = {
                "assessment": assessment.to_dict(),
                "levels": outcome.to_dict(),
            }
            for key, value in outcome.to_dict().items():
                level_counts[key][value] = level_counts[key].get(value, 0) + 1

        _atomic_write_json(reports / "patients.json", per_patient)
        _atomic_write_json(
            reports / "metrics.json",
            {"assessed": len(assessed), "level_counts": level_counts},
        )
        return reports
