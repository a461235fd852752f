from .model import (
    AGE_BANDS,
    EMOTIONS,
    GENDERS,
    TRACK_KINDS,
    CharacterProfile,
    DialogueLine,
    DialogueScript,
    EmotionInstruction,
    ProductionScript,
    TrackEntry,
    Violation,
    validate,
)
from .serialize import SCHEMA_VERSION, deserialize, script_from_dict, script_to_dict, serialize
from .diffing import ADDED, CHANGED, REMOVED, EntryDelta, diff

__all__ = [
    "AGE_BANDS",
    "ADDED",
    "CHANGED",
    "REMOVED",
    "EMOTIONS",
    "GENDERS",
    "SCHEMA_VERSION",
    "TRACK_KINDS",
    "CharacterProfile",
    "DialogueLine",
    "DialogueScript",
    "EmotionInstruction",
    "EntryDelta",
    "ProductionScript",
    "TrackEntry",
    "Violation",
    "deserialize",
    "diff",
    "script_from_dict",
    "script_to_dict",
    "serialize",
    "validate",
]
