"""JSON documents for profiles, instances and counterexamples.

A profile document looks like::

    {"schema": {"P": 2}, "consts": ["a", "b"],
     "instances": [{"P": [["a", "b"]]}, {"P": [["a", null]]}]}

JSON ``null`` inside a tuple is the null value.  Output is deterministic:
keys sorted, tuples in canonical order.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import NULL, Instance, Profile, Schema, SchemaError


class DocumentError(ValueError):
    pass


def encode_value(v):
    return None if v is NULL else v


def decode_value(v):
    if v is None:
        return NULL
    if not isinstance(v, str):
        raise DocumentError(f"values must be strings or null, got {v!r}")
    return v


def encode_row(row) -> list:
    return [encode_value(v) for v in row]


def schema_to_json(s: Schema) -> dict:
    return {name: s.arity(name) for name in s.names}


def schema_from_json(obj) -> Schema:
    if not isinstance(obj, dict):
        raise DocumentError("schema must be an object mapping relation names to arities")
    try:
        return Schema({str(k): int(v) for k, v in obj.items()})
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"bad schema: {exc}") from None


def instance_to_json(d: Instance) -> dict:
    return {name: [encode_row(r) for r in d.rows(name)] for name in d.schema.names}


def instance_from_json(schema: Schema, obj) -> Instance:
    if not isinstance(obj, dict):
        raise DocumentError("an instance must be an object mapping relation names to tuple lists")
    unknown = set(obj) - set(schema.names)
    if unknown:
        raise DocumentError(f"instance mentions unknown relations {sorted(unknown)}")
    rels = {}
    for name, rows in obj.items():
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise DocumentError(f"relation {name} must be a list of tuples")
        rels[name] = [tuple(decode_value(v) for v in r) for r in rows]
    try:
        return Instance(schema, rels)
    except SchemaError as exc:
        raise DocumentError(str(exc)) from None


def profile_to_json(p: Profile, consts=()) -> dict:
    doc = {"schema": schema_to_json(p.schema)}
    if consts:
        doc["consts"] = sorted(consts)
    doc["instances"] = [instance_to_json(d) for d in p]
    return doc


def profile_from_json(doc) -> tuple[Profile, tuple]:
    """Return the profile and the declared constants."""
    if not isinstance(doc, dict) or "schema" not in doc or "instances" not in doc:
        raise DocumentError("a profile document needs 'schema' and 'instances'")
    schema = schema_from_json(doc["schema"])
    consts = doc.get("consts", [])
    if not isinstance(consts, list) or not all(isinstance(c, str) for c in consts):
        raise DocumentError("consts must be a list of strings")
    instances = doc["instances"]
    if not isinstance(instances, list) or not instances:
        raise DocumentError("instances must be a non-empty list")
    return Profile(instance_from_json(schema, obj) for obj in instances), tuple(consts)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from None


def load_profile(path) -> tuple[Profile, tuple]:
    return profile_from_json(read_json(path))


def save_profile(p: Profile, path, consts=()) -> None:
    Path(path).write_text(dumps(profile_to_json(p, consts)), encoding="utf-8")
