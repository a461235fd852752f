"""End-to-end generation pipeline.

Stages run strictly in order and each persists its output before the stage
marker advances, so a crashed run resumes without redoing completed work:
loop outcomes are keyed by (entry, script version) and reloaded instead of
re-executed. Under the mock suite the whole pipeline is a deterministic
function of (prompt, config): two runs produce byte-identical project trees.
"""
from __future__ import annotations

import json
import logging
import zlib
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..backends.base import TextRequest
from ..backends.registry import build_gateway
from ..errors import PreproductionError, ProjectError
from ..loops import run_nonspeech_loop, run_speech_loop
from ..mix import render
from ..script import (
    CharacterProfile,
    DialogueLine,
    DialogueScript,
    EmotionInstruction,
    ProductionScript,
    TrackEntry,
    validate,
)
from ..voices import build_index, cast_voice, load_default_library, semantic_filter
from .project import EngineConfig, Project

log = logging.getLogger(__name__)

PREPRODUCE_RETRIES = 2
AMBIENCE_RETRIES = 1

STAGES = ("created", "preproduced", "cast", "speech_done", "script_built",
          "nonspeech_done", "rendered")


# ---------------------------------------------------------------------------
# Stage 1: pre-production
# ---------------------------------------------------------------------------

_PREPRODUCE_TEMPLATE = """You are the director of an audio story production.
Turn the user prompt into a dialogue script. Reply with JSON only:
{{"profiles": [{{"id": str, "name": str, "gender": "male|female|unspecified",
  "age_band": "child|young|adult|senior", "timbre_notes": str,
  "delivery_style": str}}],
 "lines": [{{"speaker_id": str, "text": str, "scene_context": str,
  "emotion": {{"anger|happiness|fear|disgust|sadness|surprise|neutral": weight}}}}]}}
Every line's speaker_id must reference a declared profile.

User prompt: {prompt}
"""


def _dialogue_from_doc(doc: dict) -> DialogueScript:
    profiles = tuple(
        CharacterProfile(
            id=p["id"],
            name=p["name"],
            gender=p.get("gender", "unspecified"),
            age_band=p.get("age_band", "adult"),
            timbre_notes=p.get("timbre_notes", ""),
            delivery_style=p.get("delivery_style", ""),
        )
        for p in doc["profiles"]
    )
    known = {p.id for p in profiles}
    lines = []
    for i, ln in enumerate(doc["lines"]):
        if ln["speaker_id"] not in known:
            raise ValueError(f"line {i} references undeclared speaker {ln['speaker_id']!r}")
        if not ln.get("text"):
            raise ValueError(f"line {i} has empty text")
        lines.append(
            DialogueLine(
                line_id=f"L{i + 1:03d}",
                speaker_id=ln["speaker_id"],
                text=ln["text"],
                scene_context=ln.get("scene_context", ""),
                emotion=EmotionInstruction.from_mapping(ln.get("emotion", {"neutral": 1.0})),
            )
        )
    if not lines:
        raise ValueError("dialogue script has no lines")
    return DialogueScript(profiles=profiles, lines=tuple(lines))


def dialogue_to_doc(dialogue: DialogueScript) -> dict:
    return {
        "profiles": [
            {"id": p.id, "name": p.name, "gender": p.gender, "age_band": p.age_band,
             "timbre_notes": p.timbre_notes, "delivery_style": p.delivery_style}
            for p in dialogue.profiles
        ],
        "lines": [
            {"speaker_id": ln.speaker_id, "line_id": ln.line_id,
             "text": ln.text, "scene_context": ln.scene_context,
             "emotion": dict(zip(
                 ("anger", "happiness", "fear", "disgust", "sadness", "surprise", "neutral"),
                 ln.emotion.weights,
             ))}
            for ln in dialogue.lines
        ],
    }


def dialogue_from_saved(doc: dict) -> DialogueScript:
    dialogue = _dialogue_from_doc(doc)
    # preserve original line ids from the saved document
    lines = tuple(
        DialogueLine(
            line_id=saved.get("line_id", built.line_id),
            speaker_id=built.speaker_id,
            text=built.text,
            scene_context=built.scene_context,
            emotion=built.emotion,
        )
        for saved, built in zip(doc["lines"], dialogue.lines)
    )
    return DialogueScript(profiles=dialogue.profiles, lines=lines)


def preproduce(prompt: str, gateway) -> DialogueScript:
    """Prompt the text backend for a structured dialogue script; retry on
    malformed output, then fail with the raw response attached."""
    if not prompt.strip():
        raise PreproductionError("empty prompt")
    base = _PREPRODUCE_TEMPLATE.format(prompt=prompt)
    feedback = ""
    raw = ""
    for attempt in range(PREPRODUCE_RETRIES + 1):
        raw = gateway.call("text", TextRequest(prompt=base + feedback, purpose="preproduce")).text
        try:
            return _dialogue_from_doc(json.loads(raw))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            log.warning("preproduction reply invalid (attempt %d): %s", attempt + 1, exc)
            feedback = f"\nYour previous reply was invalid ({exc}). Reply with valid JSON only."
    raise PreproductionError("text backend never produced a valid dialogue script",
                             raw_response=raw)


# ---------------------------------------------------------------------------
# Stage 2: casting
# ---------------------------------------------------------------------------

def cast_characters(dialogue: DialogueScript, gateway, config: EngineConfig) -> dict:
    entries = load_default_library()
    index = build_index(entries, gateway)
    casting = {}
    for profile in dialogue.profiles:
        candidates = semantic_filter(index, profile, k=config.top_k, gateway=gateway)
        try:
            chosen = cast_voice(candidates, dialogue, profile, gateway)
        except Exception as exc:
            if not config.cast_fallback_on_error:
                raise
            log.warning("casting failed for %r (%s); using rank-1 candidate", profile.id, exc)
            chosen = candidates[0].entry
        casting[profile.id] = chosen
    return casting


# ---------------------------------------------------------------------------
# Stage 4: production-script assembly
# ---------------------------------------------------------------------------

def _ambience_prompt(dialogue: DialogueScript, timings: list[tuple[str, float, float]],
                     total: float) -> str:
    lines = [
        "Plan ambience (sound effects and background music) for this timed dialogue.",
        f"Total duration: {total:.3f} seconds.",
        "Timed lines:",
    ]
    for line_id, start, end in timings:
        line = dialogue.line_by_id(line_id)
        speaker = dialogue.profile_by_id(line.speaker_id)
        lines.append(f"  [{start:.2f}-{end:.2f}] {speaker.name}: {line.text}")
    lines.append(
        'Reply with a JSON array of {"kind": "sfx"|"bgm", "description": str, '
        '"start_time": seconds, "duration": seconds}.'
    )
    return "\n".join(lines)


def _parse_ambience(raw: str) -> list[dict]:
    plan = json.loads(raw)
    if not isinstance(plan, list):
        raise ValueError("ambience plan must be a JSON array")
    out = []
    for i, item in enumerate(plan):
        kind = item.get("kind")
        if kind not in ("sfx", "bgm"):
            raise ValueError(f"plan[{i}]: bad kind {kind!r}")
        if not item.get("description"):
            raise ValueError(f"plan[{i}]: missing description")
        start = float(item.get("start_time", 0.0))
        duration = float(item.get("duration", 0.0))
        if start < 0 or duration <= 0:
            raise ValueError(f"plan[{i}]: bad timing")
        out.append({"kind": kind, "description": item["description"],
                    "start_time": start, "duration": duration})
    return out


def build_production_script(dialogue: DialogueScript, line_durations: dict[str, float],
                            gateway, config: EngineConfig,
                            on_warning=None) -> ProductionScript:
    """Sequential speech layout from retained asset durations, then ambience
    proposed by the text backend. Ambience failure degrades to speech-only."""
    if not dialogue.lines:
        raise ProjectError("cannot build a production script with zero dialogue lines")

    tracks = []
    timings = []
    cursor = 0.0
    for i, line in enumerate(dialogue.lines):
        duration = line_durations[line.line_id]
        tracks.append(
            TrackEntry(
                entry_id=f"sp{i + 1:03d}",
                kind="speech",
                start_time=round(cursor, 6),
                duration=round(duration, 6),
                line_id=line.line_id,
            )
        )
        timings.append((line.line_id, cursor, cursor + duration))
        cursor += duration + config.line_gap_seconds

    speech_end = timings[-1][2]
    prompt = _ambience_prompt(dialogue, timings, speech_end)

    plan = []
    for attempt in range(AMBIENCE_RETRIES + 1):
        try:
            raw = gateway.call("text", TextRequest(prompt=prompt, purpose="ambience")).text
            plan = _parse_ambience(raw)
            break
        except Exception as exc:
            log.warning("ambience planning failed (attempt %d): %s", attempt + 1, exc)
            if attempt == AMBIENCE_RETRIES:
                if on_warning:
                    on_warning(f"ambience planning unavailable: {exc}; proceeding speech-only")
                plan = []

    counters = {"sfx": 0, "bgm": 0}
    prefix = {"sfx": "fx", "bgm": "bg"}
    for item in plan:
        counters[item["kind"]] += 1
        tracks.append(
            TrackEntry(
                entry_id=f"{prefix[item['kind']]}{counters[item['kind']]:03d}",
                kind=item["kind"],
                start_time=round(item["start_time"], 6),
                duration=round(item["duration"], 6),
                description=item["description"],
            )
        )

    max_end = max(e.start_time + e.duration for e in tracks)
    script = ProductionScript(
        version=1,
        dialogue=dialogue,
        tracks=tuple(tracks),
        sample_rate_hz=config.sample_rate_hz,
        master_duration=round(max_end + config.tail_seconds, 6),
    )
    violations = validate(script)
    if violations:
        raise ProjectError(f"assembled script is invalid: {violations}")
    return script


# ---------------------------------------------------------------------------
# Full pipeline with resume
# ---------------------------------------------------------------------------

def default_project_id(prompt: str) -> str:
    return f"proj-{zlib.crc32(prompt.encode('utf-8')) & 0xFFFFFFFF:08x}"


def _run_loops(project: Project, items, runner, key_fn, version: int):
    """Run loops (possibly concurrently), recording outcomes in input order so
    persisted bytes and events stay deterministic. Completed loops are loaded
    from their attempt documents, never re-executed; on a mid-batch failure
    everything that finished before the failing item is still persisted for
    resume."""
    pending = []
    outcomes = {}
    for item in items:
        key = key_fn(item)
        existing = project.load_loop(key, version)
        if existing is not None:
            outcomes[key] = existing
        else:
            pending.append((key, item))

    if pending:
        workers = max(1, min(project.config.parallelism, len(pending)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [(key, pool.submit(runner, item)) for key, item in pending]
            for key, future in futures:
                outcome = future.result()  # raises after earlier keys are recorded
                project.record_loop(key, version, outcome)
                outcomes[key] = outcome
    return outcomes


def run_pipeline(prompt: str | None = None, root=None, project_id: str | None = None,
                 config: EngineConfig | None = None, gateway=None,
                 resume: bool = False) -> Project:
    """Create (or resume) a project and drive it to a rendered master."""
    root = Path(root)
    if resume:
        project = Project(root / project_id, gateway=gateway)
        if gateway is None:
            gateway = build_gateway({"backends": project.config.backends},
                                    parallelism=project.config.parallelism)
            project.gateway = gateway
    else:
        config = config or EngineConfig()
        project_id = project_id or default_project_id(prompt or "")
        project = Project(root / project_id, gateway=gateway, config=config,
                          prompt=prompt, create=True)
        if gateway is None:
            gateway = build_gateway({"backends": config.backends},
                                    parallelism=config.parallelism)
            project.gateway = gateway

    gateway = project.gateway
    if not gateway.resolves("text", "embed", "tts", "sfx", "bgm",
                            "speech_critic", "align_critic"):
        raise ProjectError("backend registry does not resolve all seven capabilities")

    config = project.config
    stage = project.stage

    def reached(s):
        return STAGES.index(stage) >= STAGES.index(s)

    # Stage 1: pre-production
    dialogue_path = project.path / "preproduce.json"
    if not reached("preproduced"):
        dialogue = preproduce(project.prompt, gateway)
        dialogue_path.write_text(
            json.dumps(dialogue_to_doc(dialogue), indent=2, sort_keys=True) + "\n"
        )
        project.set_stage("preproduced")
        stage = "preproduced"
    else:
        dialogue = dialogue_from_saved(json.loads(dialogue_path.read_text()))

    # Stage 2: casting
    if not reached("cast"):
        casting = cast_characters(dialogue, gateway, config)
        project.set_casting(casting)
        project.set_stage("cast")
        stage = "cast"

    # Stage 3: speech loops
    speech_outcomes = _run_loops(
        project,
        list(dialogue.lines),
        lambda line: run_speech_loop(line, project.voice_for(line.speaker_id),
                                     config.loop_config(), gateway, project.store_audio),
        lambda line: f"speech_{line.line_id}",
        version=1,
    )
    if not reached("speech_done"):
        project.set_stage("speech_done")
        stage = "speech_done"

    # Stage 4: production script
    if not reached("script_built"):
        durations = {}
        for line in dialogue.lines:
            outcome = speech_outcomes[f"speech_{line.line_id}"]
            buffer = project.buffer_for(outcome.retained_attempt.asset_id)
            durations[line.line_id] = buffer.duration
        script = build_production_script(
            dialogue, durations, gateway, config,
            on_warning=lambda msg: project.events.emit("warning", message=msg),
        )
        project.save_script(script)
        project.set_stage("script_built")
        stage = "script_built"
    else:
        script = project.script(1)

    # Stage 5: non-speech loops
    nonspeech_entries = [e for e in script.tracks if e.kind in ("sfx", "bgm")]
    ns_outcomes = _run_loops(
        project,
        nonspeech_entries,
        lambda entry: run_nonspeech_loop(entry, config.loop_config(), gateway,
                                         project.store_audio),
        lambda entry: f"ns_{entry.entry_id}",
        version=1,
    )
    if not reached("nonspeech_done"):
        asset_map = {}
        for entry in script.tracks:
            if entry.kind == "speech":
                outcome = speech_outcomes[f"speech_{entry.line_id}"]
            else:
                outcome = ns_outcomes[f"ns_{entry.entry_id}"]
            asset_map[entry.entry_id] = outcome.retained_attempt.asset_id
        project.set_asset_map(1, asset_map)
        project.set_stage("nonspeech_done")
        stage = "nonspeech_done"

    # Stage 6: initial render
    if not reached("rendered"):
        result = render(script, project.buffers_for_version(1))
        project.save_render(1, result)
        project.set_stage("rendered")

    return project
