"""Deterministic JSON report emission.

Reports must be byte-identical across repeated runs with the same config and
seed, so: keys are sorted, separators are fixed, exact rationals serialize
as {"num": ..., "den": ...}, and measured floats serialize as shortest
round-trip decimal strings -- never as binary floating literals.  Wall-clock
timings are excluded from reports by default for the same reason (the bench
command prints them to stderr instead).
"""

from __future__ import annotations

import json
from fractions import Fraction

SCHEMA_VERSION = 1


def jsonable(obj):
    """Recursively convert report payloads to canonical JSON-safe values."""
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, bytes):
        return obj.hex()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj)!r} into a report")


def canonical_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))


def make_report(command: str, config: dict, results, provenance: dict | None = None) -> dict:
    """Assemble the standard report envelope: schema version, the fully
    resolved config, the results payload, and the provenance block naming
    every formula a numeric came from."""
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "results": results,
        "provenance": provenance or {},
    }


def write_report(report: dict, path: str | None) -> str:
    text = canonical_json(report) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
