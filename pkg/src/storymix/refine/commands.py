"""Typed edit commands parsed from natural-language feedback."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..script.model import ProductionScript, TrackEntry


def _tokens(text: str) -> set[str]:
    # light plural stemming so "footsteps" finds "footstep" and vice versa
    return {t.rstrip("s") for t in re.split(r"[^a-z0-9]+", text.lower()) if t}

CATEGORY_GAIN = "signal_gain_control"
CATEGORY_STRUCTURAL = "structural_editing"
CATEGORY_SPEECH = "speech_refinement"
CATEGORY_ACOUSTIC = "acoustic_content_modification"

CATEGORIES = (CATEGORY_GAIN, CATEGORY_STRUCTURAL, CATEGORY_SPEECH, CATEGORY_ACOUSTIC)

DEFAULT_GAIN_STEP_DB = 6.0
DEFAULT_INSERT_DURATION = 2.0
SPEECH_SHIFT_FRACTION = 0.30


@dataclass(frozen=True)
class Selector:
    """Which entries a command touches.

    Exactly one addressing style is normally set: an explicit entry_id, an
    ordinal within a kind (start_time order), a description keyword, a time
    point, or a whole kind. `kind` alone selects every entry of that kind;
    an entirely empty selector selects every track entry.
    """

    entry_id: str | None = None
    kind: str | None = None  # speech | sfx | bgm | None
    ordinal: int | None = None  # 1-based; -1 means "last"
    keyword: str | None = None
    time_point: float | None = None

    def resolve(self, script: ProductionScript) -> list[TrackEntry]:
        if self.entry_id is not None:
            entry = script.entry_by_id(self.entry_id)
            return [entry] if entry else []

        pool = list(script.tracks)
        if self.kind:
            pool = [e for e in pool if e.kind == self.kind]
        if self.keyword is not None:
            needle = _tokens(self.keyword)
            pool = [
                e for e in pool
                if e.kind != "speech" and needle and needle <= _tokens(e.description or "")
            ]
        if self.time_point is not None:
            pool = [
                e for e in pool
                if e.start_time <= self.time_point < e.start_time + e.duration
            ]
        if self.ordinal is not None:
            ordered = sorted(pool, key=lambda e: (e.start_time, e.entry_id))
            if self.ordinal == -1:
                return [ordered[-1]] if ordered else []
            if 1 <= self.ordinal <= len(ordered):
                return [ordered[self.ordinal - 1]]
            return []
        return pool

    def describe(self) -> str:
        if self.entry_id:
            return f"entry {self.entry_id}"
        bits = []
        if self.ordinal:
            bits.append("last" if self.ordinal == -1 else f"#{self.ordinal}")
        if self.keyword:
            bits.append(f"'{self.keyword}'")
        if self.kind:
            bits.append(self.kind)
        if self.time_point is not None:
            bits.append(f"at {self.time_point:g}s")
        return " ".join(bits) if bits else "all entries"


@dataclass(frozen=True)
class EditCommand:
    category: str
    target: Selector
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")


@dataclass(frozen=True)
class NoParse:
    """Explicit parse refusal; never a silent guess."""

    text: str
    reason: str


@dataclass(frozen=True)
class RejectedCommand:
    command: EditCommand
    reason: str


@dataclass
class EditResult:
    updated_script: ProductionScript
    applied: list[EditCommand]
    rejected: list[RejectedCommand]
    affected: dict  # entry_id -> EntryDelta
    regen_plan: list[str]  # entry_ids needing re-synthesis

    @property
    def changed(self) -> bool:
        return bool(self.applied)
