"""Applying edit commands to a production script and driving regeneration.

apply_edit is pure (script in, script out, version +1); execute_refinement
wires a parsed feedback round through a project: re-synthesize only what
the diff says needs it, then patch the master. The patched master is byte
identical to a full re-render of the updated script, so targeted
regeneration is purely an economy measure.
"""
from __future__ import annotations

import dataclasses
import logging
import re

from ..loops import run_nonspeech_loop, run_speech_loop
from ..mix import patch, render
from ..script.diffing import diff
from ..script.model import GAIN_DB_MAX, GAIN_DB_MIN, ProductionScript, TrackEntry
from .commands import (
    CATEGORY_ACOUSTIC,
    CATEGORY_GAIN,
    CATEGORY_SPEECH,
    CATEGORY_STRUCTURAL,
    EditCommand,
    EditResult,
    RejectedCommand,
    SPEECH_SHIFT_FRACTION,
)
from .grammar import ParseOutcome, parse_instruction

log = logging.getLogger(__name__)

TAIL_SECONDS = 1.0

_ID_PREFIX = {"sfx": "fx", "bgm": "bg", "speech": "sp"}


def fresh_entry_id(script_tracks, kind: str) -> str:
    prefix = _ID_PREFIX[kind]
    highest = 0
    for e in script_tracks:
        m = re.fullmatch(rf"{prefix}(\d+)", e.entry_id)
        if m:
            highest = max(highest, int(m.group(1)))
    return f"{prefix}{highest + 1:03d}"


def _apply_gain(entry: TrackEntry, payload: dict) -> TrackEntry:
    if "set_db" in payload:
        gain = float(payload["set_db"])
    else:
        gain = entry.gain_db + float(payload["delta_db"])
    gain = min(max(gain, GAIN_DB_MIN), GAIN_DB_MAX)
    return dataclasses.replace(entry, gain_db=gain)


def apply_edit(script: ProductionScript, commands) -> EditResult:
    """Apply commands to one script version; version bumps exactly once.

    Commands whose selector resolves to nothing are rejected individually;
    the rest still apply.
    """
    tracks = {e.entry_id: e for e in script.tracks}
    order = [e.entry_id for e in script.tracks]
    lines = {ln.line_id: ln for ln in script.dialogue.lines}
    applied: list[EditCommand] = []
    rejected: list[RejectedCommand] = []

    for command in commands:
        if "insert" in command.payload:
            spec = command.payload["insert"]
            current = [tracks[eid] for eid in order]
            entry = TrackEntry(
                entry_id=fresh_entry_id(current, spec["kind"]),
                kind=spec["kind"],
                start_time=max(float(spec["start_time"]), 0.0),
                duration=float(spec.get("duration", 2.0)),
                description=spec["description"],
            )
            tracks[entry.entry_id] = entry
            order.append(entry.entry_id)
            applied.append(command)
            continue

        view = ProductionScript(
            version=script.version,
            dialogue=dataclasses.replace(script.dialogue, lines=tuple(lines.values())),
            tracks=tuple(tracks[eid] for eid in order),
            sample_rate_hz=script.sample_rate_hz,
            master_duration=script.master_duration,
        )
        targets = command.target.resolve(view)
        if not targets:
            rejected.append(RejectedCommand(command, "selector matched no entries"))
            continue

        if command.category == CATEGORY_GAIN:
            for t in targets:
                tracks[t.entry_id] = _apply_gain(tracks[t.entry_id], command.payload)
        elif command.category == CATEGORY_STRUCTURAL:
            if command.payload.get("delete"):
                for t in targets:
                    del tracks[t.entry_id]
                    order.remove(t.entry_id)
            elif "move_to" in command.payload:
                for t in targets:
                    tracks[t.entry_id] = dataclasses.replace(
                        tracks[t.entry_id], start_time=max(float(command.payload["move_to"]), 0.0)
                    )
            else:
                rejected.append(RejectedCommand(command, "unknown structural payload"))
                continue
        elif command.category == CATEGORY_SPEECH:
            speech_targets = [t for t in targets if t.kind == "speech" and t.line_id]
            if not speech_targets:
                rejected.append(RejectedCommand(command, "no speech entries selected"))
                continue
            for t in speech_targets:
                line = lines[t.line_id]
                if "emotion" in command.payload:
                    line = dataclasses.replace(
                        line,
                        emotion=line.emotion.shifted_toward(
                            command.payload["emotion"], SPEECH_SHIFT_FRACTION
                        ),
                    )
                if "text" in command.payload:
                    line = dataclasses.replace(line, text=command.payload["text"])
                lines[t.line_id] = line
        elif command.category == CATEGORY_ACOUSTIC:
            acoustic_targets = [t for t in targets if t.kind in ("sfx", "bgm")]
            if not acoustic_targets:
                rejected.append(RejectedCommand(command, "no sfx/bgm entries selected"))
                continue
            for t in acoustic_targets:
                tracks[t.entry_id] = dataclasses.replace(
                    tracks[t.entry_id], description=command.payload["description"]
                )
        applied.append(command)

    new_tracks = tuple(tracks[eid] for eid in order)
    max_end = max((e.start_time + e.duration for e in new_tracks), default=0.0)
    master_duration = script.master_duration
    if max_end > master_duration:
        master_duration = max_end + TAIL_SECONDS

    updated = ProductionScript(
        version=script.version + 1 if applied else script.version,
        dialogue=dataclasses.replace(script.dialogue, lines=tuple(lines.values())),
        tracks=new_tracks,
        sample_rate_hz=script.sample_rate_hz,
        master_duration=master_duration,
    )
    affected = diff(script, updated) if applied else {}
    regen_plan = sorted(
        eid for eid, delta in affected.items()
        if delta.render_affecting and delta.change != "removed"
    )
    return EditResult(
        updated_script=updated,
        applied=applied,
        rejected=rejected,
        affected=affected,
        regen_plan=regen_plan,
    )


@dataclasses.dataclass
class RefinementRound:
    """Everything one feedback round produced (or why it did nothing)."""

    parse: ParseOutcome
    edit: EditResult | None = None
    render: object | None = None  # mix.RenderResult
    new_version: int | None = None
    rejected: list[RejectedCommand] = dataclasses.field(default_factory=list)

    @property
    def no_parse(self) -> bool:
        return self.edit is None


def regenerate_assets(project, edit: EditResult) -> dict[str, str]:
    """Run synthesis loops for exactly the regen plan; returns entry->asset."""
    script = edit.updated_script
    new_assets: dict[str, str] = {}
    for eid in edit.regen_plan:
        entry = script.entry_by_id(eid)
        if entry is None:
            continue
        if entry.kind == "speech":
            line = script.dialogue.line_by_id(entry.line_id)
            voice = project.voice_for(line.speaker_id)
            outcome = run_speech_loop(line, voice, project.loop_config, project.gateway,
                                      project.store_audio)
            key = f"speech_{line.line_id}"
        else:
            outcome = run_nonspeech_loop(entry, project.loop_config, project.gateway,
                                         project.store_audio)
            key = f"ns_{entry.entry_id}"
        project.record_loop(key, script.version, outcome)
        new_assets[eid] = outcome.retained_attempt.asset_id
    return new_assets


def execute_refinement(project, feedback_text: str, cursor_time: float | None = None,
                       mode: str = "grammar") -> RefinementRound:
    """Parse feedback, apply it, regenerate only affected entries, remix.

    No-parse feedback (or feedback whose every command is rejected) leaves
    the project completely untouched.
    """
    old_script = project.current_script()
    outcome = parse_instruction(feedback_text, old_script, mode=mode,
                                gateway=project.gateway, cursor_time=cursor_time)
    if not outcome.commands:
        return RefinementRound(parse=outcome)

    edit = apply_edit(old_script, outcome.commands)
    if not edit.changed:
        return RefinementRound(parse=outcome, rejected=edit.rejected)

    new_assets = regenerate_assets(project, edit)
    asset_map = dict(project.asset_map())
    for eid in list(asset_map):
        if edit.updated_script.entry_by_id(eid) is None:
            del asset_map[eid]
    asset_map.update(new_assets)

    buffers = {eid: project.buffer_for(aid) for eid, aid in asset_map.items()}
    prev = project.last_render()
    if prev is not None:
        result = patch(prev, old_script, edit.updated_script, buffers)
    else:
        result = render(edit.updated_script, buffers)

    project.commit_round(edit, asset_map, result)
    return RefinementRound(parse=outcome, edit=edit, render=result,
                           new_version=edit.updated_script.version,
                           rejected=edit.rejected)
