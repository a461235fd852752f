"""Narrative and production data structures.

Everything here is an immutable value type: edits produce new objects
(and, at the production-script level, a new version number). Dataclasses
are frozen and collection fields are tuples so instances can be shared
freely across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

EMOTIONS = ("anger", "happiness", "fear", "disgust", "sadness", "surprise", "neutral")
NEUTRAL_INDEX = EMOTIONS.index("neutral")

GENDERS = ("male", "female", "unspecified")
AGE_BANDS = ("child", "young", "adult", "senior")
TRACK_KINDS = ("speech", "sfx", "bgm")

GAIN_DB_MIN = -60.0
GAIN_DB_MAX = 12.0

SIMPLEX_TOLERANCE = 1e-6

# Fields whose change requires re-synthesis of the entry's audio, as opposed
# to fields the mixer alone can honor.
RENDER_AFFECTING_FIELDS = frozenset(
    {"text", "description", "emotion", "asset_ref", "kind", "line_id", "speaker_id"}
)
MIX_ONLY_FIELDS = frozenset({"gain_db", "start_time", "duration"})


@dataclass(frozen=True)
class EmotionInstruction:
    """Convex weighting over the 7-emotion basis.

    Weights are stored normalized; any non-negative input with positive sum
    is normalized on construction, so the simplex invariant holds at exactly
    one choke point. Zero-sum or negative input is rejected.
    """

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != len(EMOTIONS):
            raise ValueError(f"expected {len(EMOTIONS)} weights, got {len(w)}")
        if any(x < 0 or not math.isfinite(x) for x in w):
            raise ValueError("emotion weights must be finite and non-negative")
        total = sum(w)
        if total <= 0:
            raise ValueError("emotion weights must not sum to zero")
        if abs(total - 1.0) > SIMPLEX_TOLERANCE:
            w = tuple(x / total for x in w)
        object.__setattr__(self, "weights", w)

    @classmethod
    def neutral(cls) -> "EmotionInstruction":
        w = [0.0] * len(EMOTIONS)
        w[NEUTRAL_INDEX] = 1.0
        return cls(tuple(w))

    @classmethod
    def single(cls, emotion: str) -> "EmotionInstruction":
        w = [0.0] * len(EMOTIONS)
        w[EMOTIONS.index(emotion)] = 1.0
        return cls(tuple(w))

    @classmethod
    def from_mapping(cls, mapping) -> "EmotionInstruction":
        w = [float(mapping.get(name, 0.0)) for name in EMOTIONS]
        return cls(tuple(w))

    def as_mapping(self) -> dict[str, float]:
        return dict(zip(EMOTIONS, self.weights))

    def dominant(self) -> str:
        """Name of the heaviest emotion; basis order breaks ties."""
        best = max(range(len(EMOTIONS)), key=lambda i: (self.weights[i], -i))
        return EMOTIONS[best]

    def shifted_toward(self, emotion: str, fraction: float) -> "EmotionInstruction":
        """Move `fraction` of total mass toward `emotion`, renormalized."""
        idx = EMOTIONS.index(emotion)
        w = [x * (1.0 - fraction) for x in self.weights]
        w[idx] += fraction
        return EmotionInstruction(tuple(w))

    def describe(self) -> str:
        """Human-readable rendering used when prompting text backends."""
        parts = [f"{name} {w:.2f}" for name, w in zip(EMOTIONS, self.weights) if w > 0.005]
        return ", ".join(parts) if parts else "neutral 1.00"


@dataclass(frozen=True)
class CharacterProfile:
    id: str
    name: str
    gender: str = "unspecified"
    age_band: str = "adult"
    timbre_notes: str = ""
    delivery_style: str = ""


@dataclass(frozen=True)
class DialogueLine:
    line_id: str
    speaker_id: str
    text: str
    scene_context: str = ""
    emotion: EmotionInstruction = field(default_factory=EmotionInstruction.neutral)


@dataclass(frozen=True)
class DialogueScript:
    profiles: tuple[CharacterProfile, ...]
    lines: tuple[DialogueLine, ...]

    def __post_init__(self):
        object.__setattr__(self, "profiles", tuple(self.profiles))
        object.__setattr__(self, "lines", tuple(self.lines))

    def profile_by_id(self, pid: str) -> CharacterProfile | None:
        for p in self.profiles:
            if p.id == pid:
                return p
        return None

    def line_by_id(self, lid: str) -> DialogueLine | None:
        for ln in self.lines:
            if ln.line_id == lid:
                return ln
        return None


@dataclass(frozen=True)
class TrackEntry:
    """One placement on the production timeline.

    `duration` is advisory for generative kinds: the synthesized asset's true
    length wins at mix time (BGM is the exception, it is fitted to the entry
    duration). Speech entries reference a dialogue line; sfx/bgm entries carry
    a free-text description instead.
    """

    entry_id: str
    kind: str
    start_time: float
    duration: float
    description: str | None = None
    line_id: str | None = None
    gain_db: float = 0.0
    asset_ref: str | None = None


@dataclass(frozen=True)
class ProductionScript:
    version: int
    dialogue: DialogueScript
    tracks: tuple[TrackEntry, ...]
    sample_rate_hz: int = 48000
    master_duration: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "tracks", tuple(self.tracks))

    def entry_by_id(self, eid: str) -> TrackEntry | None:
        for e in self.tracks:
            if e.entry_id == eid:
                return e
        return None

    def entries_of_kind(self, kind: str) -> tuple[TrackEntry, ...]:
        """Entries of one kind ordered by start time (ordinal-selector order)."""
        subset = [e for e in self.tracks if e.kind == kind]
        subset.sort(key=lambda e: (e.start_time, e.entry_id))
        return tuple(subset)

    def with_tracks(self, tracks, bump_version: bool = False, master_duration=None) -> "ProductionScript":
        return replace(
            self,
            tracks=tuple(tracks),
            version=self.version + 1 if bump_version else self.version,
            master_duration=self.master_duration if master_duration is None else master_duration,
        )


@dataclass(frozen=True)
class Violation:
    """One broken invariant, naming the offending element and rule."""

    where: str
    rule: str
    message: str

    def __str__(self):
        return f"{self.where}: {self.rule}: {self.message}"


def validate(script: ProductionScript) -> list[Violation]:
    """Check every structural invariant; violations are data, not failures."""
    out: list[Violation] = []

    if script.version < 1:
        out.append(Violation("script", "version", "version must be >= 1"))
    if script.sample_rate_hz <= 0:
        out.append(Violation("script", "sample_rate", "sample_rate_hz must be positive"))

    seen_profiles: set[str] = set()
    for p in script.dialogue.profiles:
        where = f"profile {p.id or '<empty>'}"
        if not p.id:
            out.append(Violation(where, "profile_id", "id must be non-empty"))
        elif p.id in seen_profiles:
            out.append(Violation(where, "profile_id_unique", "duplicate profile id"))
        seen_profiles.add(p.id)
        if not p.name:
            out.append(Violation(where, "profile_name", "name must be non-empty"))
        if p.gender not in GENDERS:
            out.append(Violation(where, "gender", f"gender must be one of {GENDERS}"))
        if p.age_band not in AGE_BANDS:
            out.append(Violation(where, "age_band", f"age_band must be one of {AGE_BANDS}"))

    seen_lines: set[str] = set()
    for ln in script.dialogue.lines:
        where = f"line {ln.line_id or '<empty>'}"
        if not ln.line_id:
            out.append(Violation(where, "line_id", "line_id must be non-empty"))
        elif ln.line_id in seen_lines:
            out.append(Violation(where, "line_id_unique", "duplicate line_id"))
        seen_lines.add(ln.line_id)
        if ln.speaker_id not in seen_profiles:
            out.append(Violation(where, "speaker_ref", f"speaker_id {ln.speaker_id!r} does not resolve"))
        if not ln.text:
            out.append(Violation(where, "line_text", "text must be non-empty"))
        total = sum(ln.emotion.weights)
        if abs(total - 1.0) > SIMPLEX_TOLERANCE or any(w < 0 for w in ln.emotion.weights):
            out.append(Violation(where, "emotion_simplex", f"emotion weights sum to {total}"))

    seen_entries: set[str] = set()
    max_end = 0.0
    for e in script.tracks:
        where = f"entry {e.entry_id or '<empty>'}"
        if not e.entry_id:
            out.append(Violation(where, "entry_id", "entry_id must be non-empty"))
        elif e.entry_id in seen_entries:
            out.append(Violation(where, "entry_id_unique", "duplicate entry_id"))
        seen_entries.add(e.entry_id)

        if e.kind not in TRACK_KINDS:
            out.append(Violation(where, "kind", f"kind must be one of {TRACK_KINDS}"))
        if e.start_time < 0:
            out.append(Violation(where, "start_time", "start_time must be >= 0"))
        if e.duration <= 0:
            out.append(Violation(where, "duration", "duration must be > 0"))
        if not (GAIN_DB_MIN <= e.gain_db <= GAIN_DB_MAX):
            out.append(Violation(where, "gain_range", f"gain out of range [{GAIN_DB_MIN}, {GAIN_DB_MAX}] dB"))

        if e.kind == "speech":
            if not e.line_id:
                out.append(Violation(where, "speech_line_ref", "speech entries must carry line_id"))
            elif e.line_id not in seen_lines:
                out.append(Violation(where, "speech_line_ref", f"line_id {e.line_id!r} does not resolve"))
            if e.description is not None:
                out.append(Violation(where, "speech_no_description", "speech entries must not carry description"))
        else:
            if not e.description:
                out.append(Violation(where, "description", f"{e.kind} entries must carry description"))
            if e.line_id is not None:
                out.append(Violation(where, "no_line_ref", f"{e.kind} entries must not carry line_id"))

        max_end = max(max_end, e.start_time + max(e.duration, 0.0))

    if script.tracks and script.master_duration + 1e-9 < max_end:
        out.append(
            Violation(
                "script",
                "master_duration",
                f"master_duration {script.master_duration} < track extent {max_end}",
            )
        )
    if script.master_duration < 0:
        out.append(Violation("script", "master_duration", "master_duration must be >= 0"))

    return out
