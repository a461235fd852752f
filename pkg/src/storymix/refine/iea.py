"""Instruction-execution accuracy harness.

Feeds a corpus of natural-language edit instructions through parse+apply
against fixture scripts and scores each by exact effect match: the set of
changed entries and the concrete change must both equal the stated intent.
The report groups accuracy by the four instruction families (gain control,
structural edits, speech refinement, acoustic content changes).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..script.model import (
    CharacterProfile,
    DialogueLine,
    DialogueScript,
    EmotionInstruction,
    ProductionScript,
    TrackEntry,
)
from .apply import apply_edit
from .commands import CATEGORIES, SPEECH_SHIFT_FRACTION
from .grammar import parse_instruction

TIME_TOLERANCE = 0.011
GAIN_TOLERANCE = 1e-6
WEIGHT_TOLERANCE = 1e-6


# ---------------------------------------------------------------------------
# Fixture scripts
# ---------------------------------------------------------------------------

def _emotion(**weights):
    return EmotionInstruction.from_mapping(weights)


def _story_basic() -> ProductionScript:
    dialogue = DialogueScript(
        profiles=(
            CharacterProfile(id="narrator", name="Narrator", gender="female",
                             age_band="adult", timbre_notes="warm, low",
                             delivery_style="measured"),
            CharacterProfile(id="elian", name="Elian", gender="male", age_band="young",
                             timbre_notes="bright", delivery_style="animated"),
        ),
        lines=(
            DialogueLine(line_id="L1", speaker_id="narrator",
                         text="Rain hammered the shutters of the old lighthouse.",
                         scene_context="stormy night",
                         emotion=_emotion(fear=0.2, neutral=0.8)),
            DialogueLine(line_id="L2", speaker_id="elian",
                         text="Did you hear that knock?",
                         scene_context="stormy night",
                         emotion=_emotion(surprise=0.5, fear=0.3, neutral=0.2)),
            DialogueLine(line_id="L3", speaker_id="narrator",
                         text="Something was waiting outside in the dark.",
                         scene_context="stormy night",
                         emotion=_emotion(fear=0.5, sadness=0.1, neutral=0.4)),
        ),
    )
    tracks = (
        TrackEntry("sp001", "speech", 0.0, 2.8, line_id="L1"),
        TrackEntry("sp002", "speech", 3.2, 1.6, line_id="L2"),
        TrackEntry("sp003", "speech", 5.2, 2.6, line_id="L3"),
        TrackEntry("fx001", "sfx", 0.0, 8.0, description="steady rain on windows", gain_db=-8.0),
        TrackEntry("fx002", "sfx", 2.9, 1.2, description="heavy door knock"),
        TrackEntry("bg001", "bgm", 0.0, 9.0, description="low uneasy string drone", gain_db=-4.0),
    )
    return ProductionScript(version=1, dialogue=dialogue, tracks=tracks,
                            sample_rate_hz=48000, master_duration=10.0)


def _dense_overlap() -> ProductionScript:
    dialogue = DialogueScript(
        profiles=(
            CharacterProfile(id="narrator", name="Narrator", gender="male",
                             age_band="senior", timbre_notes="gravelly",
                             delivery_style="slow and deliberate"),
            CharacterProfile(id="mara", name="Mara", gender="female", age_band="adult",
                             timbre_notes="sharp", delivery_style="urgent"),
        ),
        lines=(
            DialogueLine(line_id="L1", speaker_id="narrator",
                         text="They crossed the courtyard in the rain.",
                         scene_context="night escape",
                         emotion=_emotion(fear=0.3, neutral=0.7)),
            DialogueLine(line_id="L2", speaker_id="mara",
                         text="Keep your head down and walk.",
                         scene_context="night escape",
                         emotion=_emotion(fear=0.4, anger=0.2, neutral=0.4)),
        ),
    )
    tracks = (
        TrackEntry("sp001", "speech", 0.0, 2.2, line_id="L1"),
        TrackEntry("sp002", "speech", 2.6, 1.8, line_id="L2"),
        TrackEntry("fx001", "sfx", 4.0, 3.0, description="footsteps on gravel", gain_db=-2.0),
        TrackEntry("fx002", "sfx", 5.0, 3.0, description="footsteps in shallow puddles",
                   gain_db=-2.0),
        TrackEntry("fx003", "sfx", 0.0, 12.0, description="steady rain", gain_db=-10.0),
        TrackEntry("fx004", "sfx", 6.0, 2.0, description="distant thunder roll", gain_db=-6.0),
        TrackEntry("bg001", "bgm", 0.0, 12.5, description="tense pulsing synth bed",
                   gain_db=-12.0),
    )
    return ProductionScript(version=1, dialogue=dialogue, tracks=tracks,
                            sample_rate_hz=48000, master_duration=13.5)


def _podcast_two_hosts() -> ProductionScript:
    dialogue = DialogueScript(
        profiles=(
            CharacterProfile(id="ana", name="Ana", gender="female", age_band="adult",
                             timbre_notes="smooth", delivery_style="brisk"),
            CharacterProfile(id="ben", name="Ben", gender="male", age_band="adult",
                             timbre_notes="deep", delivery_style="relaxed"),
        ),
        lines=tuple(
            DialogueLine(
                line_id=f"L{i + 1}",
                speaker_id="ana" if i % 2 == 0 else "ben",
                text=text,
                scene_context="studio conversation",
                emotion=_emotion(happiness=0.3, neutral=0.7),
            )
            for i, text in enumerate([
                "Welcome back to the show, everyone.",
                "Today we are talking about deep sea exploration.",
                "The pressure down there crushes almost everything.",
                "And yet life finds a way to thrive.",
                "Wait until you hear about the glowing sharks.",
                "Stick around, this one gets weird.",
            ])
        ),
    )
    tracks = (
        TrackEntry("sp001", "speech", 0.0, 2.0, line_id="L1"),
        TrackEntry("sp002", "speech", 2.5, 2.0, line_id="L2"),
        TrackEntry("sp003", "speech", 5.0, 2.0, line_id="L3"),
        TrackEntry("sp004", "speech", 7.5, 2.0, line_id="L4"),
        TrackEntry("sp005", "speech", 10.0, 2.0, line_id="L5"),
        TrackEntry("sp006", "speech", 12.5, 2.0, line_id="L6"),
        TrackEntry("bg001", "bgm", 0.0, 4.0, description="bright podcast intro theme",
                   gain_db=-10.0),
        TrackEntry("bg002", "bgm", 12.0, 4.0, description="mellow outro groove", gain_db=-14.0),
        TrackEntry("fx001", "sfx", 5.5, 0.8, description="notification chime", gain_db=-5.0),
    )
    return ProductionScript(version=1, dialogue=dialogue, tracks=tracks,
                            sample_rate_hz=48000, master_duration=17.0)


_FIXTURES = {
    "story_basic": _story_basic,
    "dense_overlap": _dense_overlap,
    "podcast_two_hosts": _podcast_two_hosts,
}


def fixture(fixture_id: str) -> ProductionScript:
    """A fresh copy of a named fixture script."""
    try:
        return _FIXTURES[fixture_id]()
    except KeyError:
        raise KeyError(f"unknown fixture {fixture_id!r}; have {sorted(_FIXTURES)}")


def fixture_ids() -> list[str]:
    return sorted(_FIXTURES)


# ---------------------------------------------------------------------------
# Corpus model and evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusItem:
    item_id: str
    category: str
    instruction: str
    fixture: str
    expected: dict
    cursor_time: float | None = None


@dataclass
class CategoryScore:
    total: int = 0
    correct: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


@dataclass
class IeaReport:
    by_category: dict[str, CategoryScore]
    overall_total: int
    overall_correct: int

    @property
    def overall_accuracy(self) -> float:
        return self.overall_correct / self.overall_total if self.overall_total else 0.0

    def table(self) -> str:
        rows = [("Instruction Category", "IEA (%)")]
        names = {
            "signal_gain_control": "Signal Gain Control",
            "structural_editing": "Structural Editing",
            "speech_refinement": "Speech Refinement",
            "acoustic_content_modification": "Acoustic Content Modification",
        }
        for cat in CATEGORIES:
            score = self.by_category.get(cat, CategoryScore())
            rows.append((names[cat], f"{100 * score.accuracy:.2f}"))
        rows.append(("Overall Average", f"{100 * self.overall_accuracy:.2f}"))
        width = max(len(r[0]) for r in rows) + 2
        return "\n".join(f"{name:<{width}}{val}" for name, val in rows)


def load_corpus(path) -> list[CorpusItem]:
    doc = json.loads(Path(path).read_text())
    return [
        CorpusItem(
            item_id=item["id"],
            category=item["category"],
            instruction=item["instruction"],
            fixture=item["fixture"],
            expected=item["expected"],
            cursor_time=item.get("cursor_time"),
        )
        for item in doc["items"]
    ]


def write_corpus(path, items) -> None:
    doc = {
        "corpus_version": 1,
        "items": [
            {
                "id": it.item_id,
                "category": it.category,
                "instruction": it.instruction,
                "fixture": it.fixture,
                **({"cursor_time": it.cursor_time} if it.cursor_time is not None else {}),
                "expected": it.expected,
            }
            for it in items
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _close(a, b, tol) -> bool:
    return abs(float(a) - float(b)) <= tol


def _effect_matches(expected: dict, old: ProductionScript, result) -> bool:
    """Strict comparison: intended targets changed as stated, nothing else."""
    new = result.updated_script
    affected = result.affected
    effect = expected["effect"]

    if effect == "gain":
        gains = expected["gains"]
        if set(affected) != set(gains):
            return False
        for eid, value in gains.items():
            delta = affected[eid]
            if delta.change != "attribute-changed" or delta.fields != ("gain_db",):
                return False
            if not _close(new.entry_by_id(eid).gain_db, value, GAIN_TOLERANCE):
                return False
        return True

    if effect == "insert":
        added = [eid for eid, d in affected.items() if d.change == "added"]
        others = [eid for eid in affected if eid not in added]
        if len(added) != 1 or others:
            return False
        entry = new.entry_by_id(added[0])
        if entry.kind != expected["kind"]:
            return False
        if expected["description_contains"].lower() not in (entry.description or "").lower():
            return False
        return _close(entry.start_time, expected["start_time"], TIME_TOLERANCE)

    if effect == "delete":
        removed = {eid for eid, d in affected.items() if d.change == "removed"}
        return removed == set(expected["targets"]) and set(affected) == removed

    if effect == "move":
        moves = expected["moves"]
        if set(affected) != set(moves):
            return False
        for eid, when in moves.items():
            delta = affected[eid]
            if delta.change != "attribute-changed" or delta.fields != ("start_time",):
                return False
            if not _close(new.entry_by_id(eid).start_time, when, TIME_TOLERANCE):
                return False
        return True

    if effect == "emotion":
        targets = set(expected["targets"])
        if set(affected) != targets:
            return False
        for eid in targets:
            old_entry = old.entry_by_id(eid)
            new_entry = new.entry_by_id(eid)
            old_line = old.dialogue.line_by_id(old_entry.line_id)
            new_line = new.dialogue.line_by_id(new_entry.line_id)
            intended = old_line.emotion.shifted_toward(
                expected["emotion"], SPEECH_SHIFT_FRACTION
            )
            if any(
                not _close(a, b, WEIGHT_TOLERANCE)
                for a, b in zip(new_line.emotion.weights, intended.weights)
            ):
                return False
        return True

    if effect == "text":
        texts = expected["texts"]
        if set(affected) != set(texts):
            return False
        for eid, wanted in texts.items():
            entry = new.entry_by_id(eid)
            if new.dialogue.line_by_id(entry.line_id).text != wanted:
                return False
        return True

    if effect == "description":
        descriptions = expected["descriptions"]
        if set(affected) != set(descriptions):
            return False
        for eid, wanted in descriptions.items():
            delta = affected[eid]
            if delta.change != "attribute-changed" or delta.fields != ("description",):
                return False
            if new.entry_by_id(eid).description != wanted:
                return False
        return True

    raise ValueError(f"unknown expected effect {effect!r}")


def evaluate_item(item: CorpusItem, mode: str = "grammar", gateway=None) -> bool:
    script = fixture(item.fixture)
    outcome = parse_instruction(item.instruction, script, mode=mode, gateway=gateway,
                                cursor_time=item.cursor_time)
    if not outcome.commands or outcome.unparsed:
        return False
    result = apply_edit(script, outcome.commands)
    if result.rejected or not result.changed:
        return False
    return _effect_matches(item.expected, script, result)


def evaluate_iea(items, mode: str = "grammar", gateway=None) -> IeaReport:
    by_category = {cat: CategoryScore() for cat in CATEGORIES}
    for item in items:
        score = by_category.setdefault(item.category, CategoryScore())
        score.total += 1
        if evaluate_item(item, mode=mode, gateway=gateway):
            score.correct += 1
        else:
            score.failures.append(item.item_id)
    total = sum(s.total for s in by_category.values())
    correct = sum(s.correct for s in by_category.values())
    return IeaReport(by_category=by_category, overall_total=total, overall_correct=correct)
