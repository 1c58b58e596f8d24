from __future__ import annotations

import json

import pytest

from medreview.runner.sampling import EvaluationSet
from medreview.store import (
    ConcurrentWriter,
    EmptySessionReport,
    InvalidTransition,
    PatientStatus,
    ReviewNotFound,
    SessionExists,
    SessionNotFound,
    Store,
    UnknownPatient,
)

from conftest import make_assessment, make_review


def eval_set(n=4):
    ids = [f"p{i}" for i in range(n)]
    half = n // 2
    return EvaluationSet(indicator_positive=ids[:half], matched_negative=ids[half:])


@pytest.fixture
def store(tmp_path):
    return Store(tmp_path)


@pytest.fixture
def session(store):
    store.create_session("s1", "cohort.json", eval_set())
    return "s1"


# -- session lifecycle --------------------------------------------------------

def test_create_and_load_round_trip(store, session):
    record = store.load_session(session)
    assert record.session_id == "s1"
    assert record.cohort_ref == "cohort.json"
    assert all(s is PatientStatus.PENDING for s in record.status.values())


def test_duplicate_session_rejected(store, session):
    with pytest.raises(SessionExists):
        store.create_session("s1", "cohort.json", eval_set())


def test_missing_session_rejected(store):
    with pytest.raises(SessionNotFound):
        store.load_session("nope")


def test_overlapping_strata_rejected(store):
    bad = EvaluationSet(indicator_positive=["p1"], matched_negative=["p1"])
    with pytest.raises(ValueError):
        store.create_session("s2", "cohort.json", bad)


# -- transitions --------------------------------------------------------------

def test_review_then_assess(store, session):
    store.save_review(session, "p0", [make_review(1)], {"model": "stub"})
    record = store.append_assessment(session, "p0", make_assessment(1, 0))
    assert record.status_of("p0") is PatientStatus.ASSESSED


def test_assessing_pending_patient_rejected(store, session):
    with pytest.raises(InvalidTransition):
        store.append_assessment(session, "p0", make_assessment(1, 0))


def test_reviewing_twice_rejected(store, session):
    store.save_review(session, "p0", [make_review(1)], {})
    with pytest.raises(InvalidTransition):
        store.save_review(session, "p0", [make_review(1)], {})


def test_unknown_patient_rejected(store, session):
    with pytest.raises(UnknownPatient):
        store.save_review(session, "zz", [make_review(1)], {})
    with pytest.raises(UnknownPatient):
        store.mark_sufficiency(session, "zz", True)


def test_insufficient_marks_excluded(store, session):
    store.save_review(session, "p0", [make_review(1)], {})
    record = store.mark_sufficiency(session, "p0", sufficient=False)
    assert record.status_of("p0") is PatientStatus.EXCLUDED_INSUFFICIENT
    with pytest.raises(InvalidTransition):
        store.append_assessment(session, "p0", make_assessment(1, 0))


def test_sufficient_confirmation_keeps_status(store, session):
    store.save_review(session, "p0", [make_review(1)], {})
    record = store.mark_sufficiency(session, "p0", sufficient=True)
    assert record.status_of("p0") is PatientStatus.REVIEWED


def test_insufficient_assessment_excludes(store, session):
    store.save_review(session, "p0", [make_review(1)], {})
    record = store.append_assessment(
        session, "p0", make_assessment(0, 0, sufficient=False)
    )
    assert record.status_of("p0") is PatientStatus.EXCLUDED_INSUFFICIENT


def test_counts_track_exclusions(store, tmp_path):
    # The familiar shape: review everyone, exclude some, assess the rest.
    store.create_session("big", "cohort.json", eval_set(20))
    for i in range(20):
        store.save_review("big", f"p{i}", [make_review(1)], {})
    for i in range(3):
        store.mark_sufficiency("big", f"p{i}", sufficient=False)
    for i in range(3, 20):
        store.append_assessment("big", f"p{i}", make_assessment(1, 0))
    counts = store.progress("big")
    assert counts["excluded_insufficient"] == 3
    assert counts["assessed"] == 17
    assert counts["total"] == 20
    assert counts["evaluable"] == 17


# -- reviews and assessments --------------------------------------------------

def test_review_round_trip(store, session):
    outputs = [make_review(2), make_review(2)]
    store.save_review(session, "p0", outputs, {"model": "m", "epochs": 2})
    loaded, metadata = store.load_review(session, "p0")
    assert [o.to_dict() for o in loaded] == [o.to_dict() for o in outputs]
    assert metadata == {"model": "m", "epochs": 2}


def test_missing_review_rejected(store, session):
    with pytest.raises(ReviewNotFound):
        store.load_review(session, "p0")


def test_assessment_versions_accumulate(store, session):
    store.save_review(session, "p0", [make_review(2)], {})
    first = make_assessment(2, 0)
    store.append_assessment(session, "p0", first)
    # A corrected record can be filed later without losing the original.
    second = make_assessment(1, 1)
    adir = store._assessment_dir(session, "p0")
    from medreview.store.store import _atomic_write_json

    with store.writer_lock(session):
        _atomic_write_json(adir / "2.json", second.to_dict())

    records = store.load_assessments(session, "p0")
    assert len(records) == 2
    assert store.latest_assessment(session, "p0").to_dict() == second.to_dict()


def test_next_gradable_walks_reviewed_patients(store, session):
    assert store.next_gradable(session) is None
    store.save_review(session, "p1", [make_review(1)], {})
    store.save_review(session, "p0", [make_review(1)], {})
    # Session order, not review order.
    assert store.next_gradable(session) == "p0"
    store.append_assessment(session, "p0", make_assessment(1, 0))
    assert store.next_gradable(session) == "p1"
    store.append_assessment(session, "p1", make_assessment(1, 0))
    assert store.next_gradable(session) is None


# -- locking and atomicity ----------------------------------------------------

def test_concurrent_writer_rejected(store, session):
    with store.writer_lock(session):
        with pytest.raises(ConcurrentWriter):
            store.save_review(session, "p0", [make_review(1)], {})
    # Lock released: the write now goes through.
    store.save_review(session, "p0", [make_review(1)], {})


def test_no_torn_files_left_behind(store, session, tmp_path):
    store.save_review(session, "p0", [make_review(1)], {})
    store.append_assessment(session, "p0", make_assessment(1, 0))
    leftovers = list(tmp_path.rglob(".tmp-*")) + list(tmp_path.rglob("*.lock"))
    assert leftovers == []


def test_session_file_is_valid_json_after_every_write(store, session):
    for pid in ("p0", "p1"):
        store.save_review(session, pid, [make_review(1)], {})
        doc = json.loads(store._session_path(session).read_text())
        assert doc["status"][pid] == "reviewed"


# -- report export ------------------------------------------------------------

def test_export_requires_assessed_patient(store, session):
    with pytest.raises(EmptySessionReport):
        store.export_report(session)


def test_export_is_deterministic(store, session):
    store.save_review(session, "p0", [make_review(2)], {})
    store.append_assessment(session, "p0", make_assessment(2, 0))
    store.save_review(session, "p2", [make_review(1)], {})
    store.append_assessment(session, "p2", make_assessment(0, 1, missed=1))

    reports = store.export_report(session)
    first = {p.name: p.read_bytes() for p in reports.iterdir()}
    reports = store.export_report(session)
    second = {p.name: p.read_bytes() for p in reports.iterdir()}
    assert first == second
    assert set(first) == {"cohort.csv", "patients.json", "metrics.json"}


def test_export_contents(store, session):
    store.save_review(session, "p0", [make_review(2)], {})
    store.append_assessment(session, "p0", make_assessment(2, 0))
    store.save_review(session, "p2", [make_review(1)], {})
    store.append_assessment(session, "p2", make_assessment(0, 1, missed=1))

    reports = store.export_report(session)
    csv_lines = (reports / "cohort.csv").read_text().splitlines()
    assert csv_lines[0] == "patient_id,status"
    assert "p0,assessed" in csv_lines and "p1,pending" in csv_lines

    metrics = json.loads((reports / "metrics.json").read_text())
    assert metrics["assessed"] == 2
    assert sum(metrics["level_counts"]["level1"].values()) == 2

    patients = json.loads((reports / "patients.json").read_text())
    assert set(patients) == {"p0", "p2"}
    assert "levels" in patients["p0"] and "assessment" in patients["p0"]
