"""Project store: versioned scripts, content-addressed assets, loop records,
renders and progress events under one directory.

Layout:

    <root>/<project_id>/
        project.json                   state, casting, per-version asset maps
        scripts/script_v0001.aud.json  canonical script documents
        assets/<sha256>.wav            content-addressed float32 audio
        attempts/<key>.json            one LoopOutcome document per loop
        renders/master_v0001.wav       one master per rendered version
        renders/master_v0001.meta.json peak / scale / duration sidecar
        events.jsonl                   progress event log

Nothing in the tree carries wall-clock time: a pipeline run is a pure
function of (prompt fixtures, seeds, config), byte for byte.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ProjectError
from ..loops import LoopConfig, LoopOutcome
from ..mix import RenderResult, render, write_wav
from ..script import ProductionScript, deserialize, serialize
from ..voices import VoiceEntry
from .assets import AssetStore
from .events import EventLog


@dataclass(frozen=True)
class EngineConfig:
    """Pipeline-wide knobs; serialized into project.json for reproducibility."""

    tau_speech: float = 0.625
    tau_ns: float = 0.65
    n_max: int = 3
    refinement_policy: str = "deterministic"
    top_k: int = 5
    sample_rate_hz: int = 48000
    line_gap_seconds: float = 0.4
    tail_seconds: float = 1.0
    parallelism: int = 4
    cast_fallback_on_error: bool = True
    backends: dict = field(default_factory=dict)

    def loop_config(self) -> LoopConfig:
        return LoopConfig(
            tau_speech=self.tau_speech,
            tau_ns=self.tau_ns,
            n_max=self.n_max,
            refinement_policy=self.refinement_policy,
        )

    def to_dict(self) -> dict:
        return {
            "tau_speech": self.tau_speech,
            "tau_ns": self.tau_ns,
            "n_max": self.n_max,
            "refinement_policy": self.refinement_policy,
            "top_k": self.top_k,
            "sample_rate_hz": self.sample_rate_hz,
            "line_gap_seconds": self.line_gap_seconds,
            "tail_seconds": self.tail_seconds,
            "parallelism": self.parallelism,
            "cast_fallback_on_error": self.cast_fallback_on_error,
            "backends": self.backends,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EngineConfig":
        known = {f: doc[f] for f in cls.__dataclass_fields__ if f in doc}
        return cls(**known)


class Project:
    """Single-writer project handle; reads are safe from any thread."""

    def __init__(self, path, gateway=None, config: EngineConfig | None = None,
                 prompt: str | None = None, create: bool = False):
        self.path = Path(path)
        self.project_id = self.path.name
        if create:
            if (self.path / "project.json").exists():
                raise ProjectError(f"project already exists at {self.path}")
            self.path.mkdir(parents=True, exist_ok=True)
            for sub in ("scripts", "assets", "attempts", "renders"):
                (self.path / sub).mkdir(exist_ok=True)
            self._state = {
                "project_id": self.project_id,
                "prompt": prompt or "",
                "config": (config or EngineConfig()).to_dict(),
                "stage": "created",
                "casting": {},
                "assets_by_version": {},
                "current_version": 0,
            }
            self._flush_state()
        else:
            state_path = self.path / "project.json"
            if not state_path.exists():
                raise ProjectError(f"no project at {self.path}")
            self._state = json.loads(state_path.read_text())

        self.config = EngineConfig.from_dict(self._state["config"])
        self.gateway = gateway
        self.store = AssetStore(self.path / "assets")
        self.events = EventLog(self.path / "events.jsonl")
        self.lock = threading.Lock()  # feedback rounds are FIFO per project
        self._renders: dict[int, RenderResult] = {}
        self._voices: dict[str, VoiceEntry] = {}

    # -- state -------------------------------------------------------------

    def _flush_state(self) -> None:
        (self.path / "project.json").write_text(
            json.dumps(self._state, indent=2, sort_keys=True) + "\n"
        )

    @property
    def prompt(self) -> str:
        return self._state["prompt"]

    @property
    def stage(self) -> str:
        return self._state["stage"]

    def set_stage(self, stage: str) -> None:
        self._state["stage"] = stage
        self._flush_state()
        self.events.emit("stage", stage=stage)

    @property
    def current_version(self) -> int:
        return int(self._state["current_version"])

    @property
    def loop_config(self) -> LoopConfig:
        return self.config.loop_config()

    # -- casting -----------------------------------------------------------

    def set_casting(self, casting: dict[str, VoiceEntry]) -> None:
        self._voices.update(casting)
        self._state["casting"] = {
            speaker: {"voice_id": v.voice_id, "audio_asset": v.audio_asset,
                      "description": v.description, "metadata": dict(v.metadata)}
            for speaker, v in {**self._casting_from_state(), **casting}.items()
        }
        self._flush_state()

    def _casting_from_state(self) -> dict[str, VoiceEntry]:
        return {
            speaker: VoiceEntry(
                voice_id=doc["voice_id"],
                audio_asset=doc["audio_asset"],
                description=doc["description"],
                metadata=dict(doc.get("metadata", {})),
            )
            for speaker, doc in self._state.get("casting", {}).items()
        }

    def voice_for(self, speaker_id: str) -> VoiceEntry:
        if speaker_id in self._voices:
            return self._voices[speaker_id]
        casting = self._casting_from_state()
        if speaker_id not in casting:
            raise ProjectError(f"no voice cast for speaker {speaker_id!r}")
        self._voices.update(casting)
        return casting[speaker_id]

    # -- scripts -----------------------------------------------------------

    def _script_path(self, version: int) -> Path:
        return self.path / "scripts" / f"script_v{version:04d}.aud.json"

    def save_script(self, script: ProductionScript) -> None:
        self._script_path(script.version).write_text(serialize(script))
        self._state["current_version"] = max(self.current_version, script.version)
        self._flush_state()

    def script(self, version: int | None = None) -> ProductionScript:
        version = version or self.current_version
        path = self._script_path(version)
        if not path.exists():
            raise ProjectError(f"no script version {version} in {self.project_id}")
        return deserialize(path.read_text())

    def current_script(self) -> ProductionScript:
        return self.script()

    def script_versions(self) -> list[int]:
        out = []
        for p in sorted((self.path / "scripts").glob("script_v*.aud.json")):
            out.append(int(p.stem.split("_v")[1].split(".")[0]))
        return out

    # -- assets ------------------------------------------------------------

    def store_audio(self, audio) -> str:
        return self.store.put(audio)

    def buffer_for(self, asset_id: str):
        return self.store.get(asset_id)

    def set_asset_map(self, version: int, mapping: dict[str, str]) -> None:
        self._state["assets_by_version"][str(version)] = dict(sorted(mapping.items()))
        self._flush_state()

    def asset_map(self, version: int | None = None) -> dict[str, str]:
        version = version or self.current_version
        return dict(self._state["assets_by_version"].get(str(version), {}))

    def buffers_for_version(self, version: int | None = None) -> dict:
        return {eid: self.store.get(aid) for eid, aid in self.asset_map(version).items()}

    # -- loop records --------------------------------------------------------

    def _attempt_path(self, key: str, version: int) -> Path:
        return self.path / "attempts" / f"{key}_v{version:04d}.json"

    def record_loop(self, key: str, version: int, outcome: LoopOutcome) -> None:
        path = self._attempt_path(key, version)
        path.write_text(json.dumps(outcome.to_dict(), indent=2, sort_keys=True) + "\n")
        self.events.emit("loop_done", key=key, version=version,
                         attempts=len(outcome.attempts),
                         retained=outcome.retained, stop_reason=outcome.stop_reason)

    def load_loop(self, key: str, version: int) -> LoopOutcome | None:
        path = self._attempt_path(key, version)
        if not path.exists():
            return None
        return LoopOutcome.from_dict(json.loads(path.read_text()))

    def loop_records(self) -> dict[str, dict]:
        out = {}
        for p in sorted((self.path / "attempts").glob("*.json")):
            out[p.stem] = json.loads(p.read_text())
        return out

    # -- renders -------------------------------------------------------------

    def _render_path(self, version: int) -> Path:
        return self.path / "renders" / f"master_v{version:04d}.wav"

    def save_render(self, version: int, result: RenderResult) -> None:
        write_wav(self._render_path(version), result.master, "float32")
        meta = {
            "script_version": version,
            "peak": result.peak,
            "scale": result.scale,
            "duration_seconds": result.master.duration,
            "sample_rate_hz": result.master.sample_rate_hz,
        }
        (self.path / "renders" / f"master_v{version:04d}.meta.json").write_text(
            json.dumps(meta, indent=2, sort_keys=True) + "\n"
        )
        self._renders[version] = result
        self.events.emit("render_done", version=version, peak=result.peak,
                         scale=result.scale)

    def render_path(self, version: int | None = None) -> Path:
        version = version or self.latest_render_version()
        path = self._render_path(version)
        if not path.exists():
            raise ProjectError(f"no render for version {version}")
        return path

    def latest_render_version(self) -> int:
        versions = [
            int(p.stem.split("_v")[1])
            for p in (self.path / "renders").glob("master_v*.wav")
        ]
        if not versions:
            raise ProjectError(f"project {self.project_id} has no renders")
        return max(versions)

    def last_render(self) -> RenderResult | None:
        """The most recent in-memory render (raw sum included, for patching)."""
        if not self._renders:
            return None
        return self._renders[max(self._renders)]

    def rerender(self, version: int | None = None) -> RenderResult:
        version = version or self.current_version
        result = render(self.script(version), self.buffers_for_version(version))
        self._renders[version] = result
        return result

    # -- refinement integration ----------------------------------------------

    def commit_round(self, edit, asset_map: dict[str, str], result: RenderResult) -> None:
        version = edit.updated_script.version
        self.save_script(edit.updated_script)
        self.set_asset_map(version, asset_map)
        self.save_render(version, result)
        self.events.emit(
            "feedback_applied",
            version=version,
            applied=len(edit.applied),
            rejected=len(edit.rejected),
            regenerated=list(edit.regen_plan),
        )

    def summary(self) -> dict:
        return {
            "project_id": self.project_id,
            "prompt": self.prompt,
            "stage": self.stage,
            "current_version": self.current_version,
            "script_versions": self.script_versions(),
            "last_event_seq": self.events.last_seq,
        }


def open_project(path, gateway=None) -> Project:
    return Project(path, gateway=gateway)
