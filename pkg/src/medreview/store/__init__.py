"""Local JSON-document persistence for sessions, reviews, and assessments."""

from .session import InvalidTransition, PatientStatus, SessionRecord, UnknownPatient
from .store import (
    ConcurrentWriter,
    EmptySessionReport,
    ReviewNotFound,
    SessionExists,
    SessionNotFound,
    Store,
)

__all__ = [
    "ConcurrentWriter",
    "EmptySessionReport",
    "InvalidTransition",
    "PatientStatus",
    "ReviewNotFound",
    "SessionExists",
    "SessionNotFound",
    "SessionRecord",
    "Store",
    "UnknownPatient",
]
