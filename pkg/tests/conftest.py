import numpy as np
import pytest

from storymix.mix import AudioBuffer
from storymix.script import (
    CharacterProfile,
    DialogueLine,
    DialogueScript,
    EmotionInstruction,
    ProductionScript,
    TrackEntry,
)


@pytest.fixture
def two_char_dialogue():
    profiles = (
        CharacterProfile(id="narrator", name="Narrator", gender="female", age_band="adult",
                         timbre_notes="warm, low", delivery_style="measured"),
        CharacterProfile(id="kid", name="Milo", gender="male", age_band="child",
                         timbre_notes="bright", delivery_style="energetic"),
    )
    lines = (
        DialogueLine(line_id="L1", speaker_id="narrator",
                     text="The attic door creaked open at midnight.",
                     scene_context="old house, storm outside",
                     emotion=EmotionInstruction.from_mapping({"fear": 0.3, "neutral": 0.7})),
        DialogueLine(line_id="L2", speaker_id="kid",
                     text="Is anyone up there?",
                     scene_context="old house, storm outside",
                     emotion=EmotionInstruction.from_mapping({"fear": 0.6, "surprise": 0.2, "neutral": 0.2})),
    )
    return DialogueScript(profiles=profiles, lines=lines)


@pytest.fixture
def small_script(two_char_dialogue):
    tracks = (
        TrackEntry(entry_id="sp001", kind="speech", start_time=0.0, duration=2.0, line_id="L1"),
        TrackEntry(entry_id="sp002", kind="speech", start_time=2.4, duration=1.5, line_id="L2"),
        TrackEntry(entry_id="fx001", kind="sfx", start_time=0.5, duration=2.0,
                   description="rain against a window"),
        TrackEntry(entry_id="bg001", kind="bgm", start_time=0.0, duration=4.9,
                   description="slow uneasy strings", gain_db=-6.0),
    )
    return ProductionScript(
        version=1,
        dialogue=two_char_dialogue,
        tracks=tracks,
        sample_rate_hz=8000,
        master_duration=4.9,
    )


def tone(freq: float, duration: float, rate: int, amp: float = 0.5) -> AudioBuffer:
    t = np.arange(int(round(duration * rate))) / rate
    return AudioBuffer((amp * np.sin(2 * np.pi * freq * t)).astype(np.float32), rate)


@pytest.fixture
def small_assets(small_script):
    rate = small_script.sample_rate_hz
    return {
        "sp001": tone(220.0, 2.0, rate, 0.4),
        "sp002": tone(330.0, 1.5, rate, 0.4),
        "fx001": tone(1000.0, 2.0, rate, 0.2),
        "bg001": tone(110.0, 2.0, rate, 0.3),
    }
