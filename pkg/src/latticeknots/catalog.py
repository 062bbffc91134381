"""Bundled reference conformations and their expected knot types."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .knot_id import KnotTag, classify
from .lattice import Polygon, parse_word, validate


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    lattice: str
    word: str
    expected: KnotTag
    provenance: str

    @property
    def polygon(self) -> Polygon:
        return _load_polygon(self.name)


def _data():
    return resources.files(__package__).joinpath("data")


def _load_polygon(name: str) -> Polygon:
    return parse_word(_data().joinpath(f"{name}.knotw").read_text(encoding="utf-8"))


def entries() -> list[CatalogEntry]:
    index = json.loads(_data().joinpath("catalog.json").read_text(encoding="utf-8"))
    out = []
    for rec in index["entries"]:
        p = _load_polygon(rec["name"])
        out.append(CatalogEntry(rec["name"], p.lattice, p.word, KnotTag(rec["expected"]), rec["provenance"]))
    return out


def get(name: str) -> CatalogEntry:
    for e in entries():
        if e.name == name:
            return e
    raise KeyError(name)


def self_test() -> list[str]:
    """Problems found when reclassifying every entry; empty when all is well."""
    problems = []
    for e in entries():
        p = e.polygon
        rep = validate(p)
        if not rep.ok:
            problems.append(f"{e.name}: invalid ({rep.first_violation})")
            continue
        got = classify(p).tag
        if got != e.expected:
            problems.append(f"{e.name}: expected {e.expected.value}, got {got.value}")
    return problems
