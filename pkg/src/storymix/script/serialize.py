"""Canonical script document serialization.

The on-disk form is UTF-8 JSON with sorted keys, two-space indent and a
mandatory schema_version field, so two serializations of the same script are
byte-identical and golden-file diffs stay stable. See docs/script-format.md.
"""
from __future__ import annotations

import json

from ..errors import ScriptParseError, ScriptValidationError
from .model import (
    CharacterProfile,
    DialogueLine,
    DialogueScript,
    EmotionInstruction,
    ProductionScript,
    TrackEntry,
    validate,
)

SCHEMA_VERSION = 1


def script_to_dict(script: ProductionScript) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "version": script.version,
        "sample_rate_hz": script.sample_rate_hz,
        "master_duration": script.master_duration,
        "dialogue": {
            "profiles": [
                {
                    "id": p.id,
                    "name": p.name,
                    "gender": p.gender,
                    "age_band": p.age_band,
                    "timbre_notes": p.timbre_notes,
                    "delivery_style": p.delivery_style,
                }
                for p in script.dialogue.profiles
            ],
            "lines": [
                {
                    "line_id": ln.line_id,
                    "speaker_id": ln.speaker_id,
                    "text": ln.text,
                    "scene_context": ln.scene_context,
                    "emotion": list(ln.emotion.weights),
                }
                for ln in script.dialogue.lines
            ],
        },
        "tracks": [
            {
                "entry_id": e.entry_id,
                "kind": e.kind,
                "start_time": e.start_time,
                "duration": e.duration,
                "description": e.description,
                "line_id": e.line_id,
                "gain_db": e.gain_db,
                "asset_ref": e.asset_ref,
            }
            for e in script.tracks
        ],
    }


def serialize(script: ProductionScript) -> str:
    """Canonical text form; requires the script to validate cleanly."""
    violations = validate(script)
    if violations:
        raise ScriptValidationError(violations)
    return json.dumps(script_to_dict(script), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise ScriptParseError(f"missing required field {key!r} in {where}")
    return doc[key]


def script_from_dict(doc: dict) -> ProductionScript:
    if not isinstance(doc, dict):
        raise ScriptParseError("document root must be an object")
    schema = _require(doc, "schema_version", "document root")
    if schema != SCHEMA_VERSION:
        raise ScriptParseError(f"unsupported schema_version {schema!r}")

    dialogue_doc = _require(doc, "dialogue", "document root")
    profiles = []
    for i, p in enumerate(dialogue_doc.get("profiles", [])):
        where = f"profiles[{i}]"
        profiles.append(
            CharacterProfile(
                id=_require(p, "id", where),
                name=_require(p, "name", where),
                gender=p.get("gender", "unspecified"),
                age_band=p.get("age_band", "adult"),
                timbre_notes=p.get("timbre_notes", ""),
                delivery_style=p.get("delivery_style", ""),
            )
        )
    lines = []
    for i, ln in enumerate(dialogue_doc.get("lines", [])):
        where = f"lines[{i}]"
        try:
            emotion = EmotionInstruction(tuple(_require(ln, "emotion", where)))
        except ValueError as exc:
            raise ScriptParseError(f"{where}: bad emotion weights: {exc}") from exc
        lines.append(
            DialogueLine(
                line_id=_require(ln, "line_id", where),
                speaker_id=_require(ln, "speaker_id", where),
                text=_require(ln, "text", where),
                scene_context=ln.get("scene_context", ""),
                emotion=emotion,
            )
        )

    tracks = []
    for i, e in enumerate(doc.get("tracks", [])):
        where = f"tracks[{i}]"
        tracks.append(
            TrackEntry(
                entry_id=_require(e, "entry_id", where),
                kind=_require(e, "kind", where),
                start_time=float(_require(e, "start_time", where)),
                duration=float(_require(e, "duration", where)),
                description=e.get("description"),
                line_id=e.get("line_id"),
                gain_db=float(e.get("gain_db", 0.0)),
                asset_ref=e.get("asset_ref"),
            )
        )

    script = ProductionScript(
        version=int(_require(doc, "version", "document root")),
        dialogue=DialogueScript(profiles=tuple(profiles), lines=tuple(lines)),
        tracks=tuple(tracks),
        sample_rate_hz=int(_require(doc, "sample_rate_hz", "document root")),
        master_duration=float(_require(doc, "master_duration", "document root")),
    )
    violations = validate(script)
    if violations:
        raise ScriptValidationError(violations)
    return script


def deserialize(document: str) -> ProductionScript:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ScriptParseError(
            f"malformed document: {exc.msg}", location=(exc.lineno, exc.colno)
        ) from exc
    return script_from_dict(doc)
