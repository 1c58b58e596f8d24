"""Versioned code dictionary: synthetic SNOMED-like and dm+d-like concepts.

Named code sets (e.g. ``methotrexate``, ``beta_blocker``) are the unit the
rule language resolves against; hierarchy expansion is out of scope.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Mapping


class UnknownCodeSet(KeyError):
    """A rule referenced a code-set name absent from the dictionary."""


@dataclass(frozen=True)
class CodeEntry:
    code: str
    display: str
    kind: str
    sets: tuple[str, ...]


class CodeDictionary:
    def __init__(self, version: str, entries: Mapping[str, CodeEntry]):
        self.version = version
        self.entries = dict(entries)
        self._by_set: dict[str, frozenset[str]] = {}
        for entry in self.entries.values():
            for name in entry.sets:
                self._by_set.setdefault(name, frozenset())
        sets: dict[str, set[str]] = {name: set() for name in self._by_set}
        for entry in self.entries.values():
            for name in entry.sets:
                sets[name].add(entry.code)
        self._by_set = {name: frozenset(codes) for name, codes in sets.items()}

    @property
    def set_names(self) -> list[str]:
        return sorted(self._by_set)

    def resolve_set(self, name: str) -> frozenset[str]:
        try:
            codes = self._by_set[name]
        except KeyError:
            raise UnknownCodeSet(name) from None
        if not codes:
            raise UnknownCodeSet(f"code set {name!r} is empty")
        return codes

    def display(self, code: str) -> str:
        entry = self.entries.get(code)
        return entry.display if entry else code

    def codes_of_kind(self, kind: str, in_no_set: bool = False) -> list[str]:
        return sorted(
            c
            for c, e in self.entries.items()
            if e.kind == kind and (not in_no_set or not e.sets)
        )

    @classmethod
    def from_dict(cls, d: dict) -> "CodeDictionary":
        entries = {
            code: CodeEntry(
                code=code,
                display=spec["display"],
                kind=spec["kind"],
                sets=tuple(spec.get("sets", [])),
            )
            for code, spec in d["codes"].items()
        }
        return cls(version=str(d.get("version", "0")), entries=entries)


def load_default_dictionary() -> CodeDictionary:
    text = resources.files("medreview.data").joinpath("code_dictionary.json").read_text()
    return CodeDictionary.from_dict(json.loads(text))
