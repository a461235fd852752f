"""Field-level script diffing.

The diff is what drives targeted regeneration: render-affecting changes
(anything that alters what a synthesizer would produce) end up in the regen
plan, mix-only changes (gain, timing) are handled by the mixer alone.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import MIX_ONLY_FIELDS, ProductionScript, RENDER_AFFECTING_FIELDS, TrackEntry

ADDED = "added"
REMOVED = "removed"
CHANGED = "attribute-changed"


@dataclass(frozen=True)
class EntryDelta:
    entry_id: str
    change: str
    fields: tuple[str, ...] = ()
    render_affecting: bool = False


def _entry_fingerprint(script: ProductionScript, entry: TrackEntry) -> dict:
    """Flatten the entry plus, for speech, its referenced line's content."""
    fp = {
        "kind": entry.kind,
        "start_time": entry.start_time,
        "duration": entry.duration,
        "description": entry.description,
        "line_id": entry.line_id,
        "gain_db": entry.gain_db,
        "asset_ref": entry.asset_ref,
    }
    if entry.kind == "speech" and entry.line_id:
        line = script.dialogue.line_by_id(entry.line_id)
        if line is not None:
            fp["text"] = line.text
            fp["emotion"] = line.emotion.weights
            fp["speaker_id"] = line.speaker_id
    return fp


def diff(old: ProductionScript, new: ProductionScript) -> dict[str, EntryDelta]:
    """Entry-keyed delta between two scripts; empty iff nothing differs."""
    old_ids = {e.entry_id for e in old.tracks}
    new_ids = {e.entry_id for e in new.tracks}
    out: dict[str, EntryDelta] = {}

    for eid in sorted(old_ids - new_ids):
        out[eid] = EntryDelta(eid, REMOVED, render_affecting=False)
    for eid in sorted(new_ids - old_ids):
        out[eid] = EntryDelta(eid, ADDED, render_affecting=True)

    for eid in sorted(old_ids & new_ids):
        fp_old = _entry_fingerprint(old, old.entry_by_id(eid))
        fp_new = _entry_fingerprint(new, new.entry_by_id(eid))
        changed = tuple(
            sorted(k for k in set(fp_old) | set(fp_new) if fp_old.get(k) != fp_new.get(k))
        )
        if changed:
            render = any(f in RENDER_AFFECTING_FIELDS for f in changed)
            assert all(f in RENDER_AFFECTING_FIELDS or f in MIX_ONLY_FIELDS for f in changed)
            out[eid] = EntryDelta(eid, CHANGED, fields=changed, render_affecting=render)

    return out
