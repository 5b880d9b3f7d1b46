"""Plain-JSON rendering of results, with deterministic ordering."""

from __future__ import annotations

import json
from dataclasses import fields, is_dataclass
from typing import Any

from .fingroup import ModVec, Perm
from .freegroup import AbelianLattice, CoreGraph, GroupWord
from .words import Substitution

SCHEMA = "retword-report/1"


def _sort_key(x: Any):
    s = str(x)
    return (len(s), s)


def to_plain(obj: Any) -> Any:
    """Convert library objects into JSON-ready values."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, GroupWord):
        return str(obj)
    if isinstance(obj, (Perm, ModVec)):
        return str(obj)
    if isinstance(obj, Substitution):
        return obj.as_dict()
    if isinstance(obj, CoreGraph):
        return {
            "rank": obj.rank,
            "vertices": obj.size,
            "basis": [str(g) for g in obj.basis],
            "edges": [list(e) for e in obj.edges],
        }
    if isinstance(obj, AbelianLattice):
        return {
            "dim": obj.dim,
            "rank": obj.rank,
            "full": obj.is_full,
            "hnf": [list(r) for r in obj.hnf],
            "elementary_divisors": list(obj.elementary_divisors),
        }
    if isinstance(obj, (set, frozenset)):
        return [to_plain(x) for x in sorted(obj, key=_sort_key)]
    if isinstance(obj, (list, tuple)):
        return [to_plain(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if is_dataclass(obj):
        return {f.name: to_plain(getattr(obj, f.name)) for f in fields(obj)}
    return str(obj)


def document(command: str, inputs: dict, result: dict, evidence: dict | None = None, constants: dict | None = None) -> dict:
    return {
        "schema": SCHEMA,
        "input": to_plain({k: v for k, v in inputs.items() if v is not None}),
        "command": command,
        "result": to_plain(result),
        "evidence": to_plain(evidence or {}),
        "constants": to_plain(constants or {}),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
