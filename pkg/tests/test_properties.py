"""Property-based checks of the core invariants."""
import dataclasses

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from storymix.loops import refine_emotion
from storymix.mix import AudioBuffer, apply_gain, resample
from storymix.script import (
    CharacterProfile,
    DialogueLine,
    DialogueScript,
    EmotionInstruction,
    ProductionScript,
    TrackEntry,
    deserialize,
    diff,
    serialize,
    validate,
)

positive_weights = st.lists(
    st.floats(min_value=0.0, max_value=10.0, allow_nan=False), min_size=7, max_size=7
).filter(lambda w: sum(w) > 1e-9)


@given(positive_weights)
def test_emotion_construction_always_lands_on_simplex(weights):
    e = EmotionInstruction(tuple(weights))
    assert all(0.0 <= w <= 1.0 for w in e.weights)
    assert abs(sum(e.weights) - 1.0) <= 1e-6


@given(positive_weights, st.sampled_from(["", "too flat", "shouting"]))
def test_refine_emotion_preserves_simplex(weights, critique):
    current = EmotionInstruction(tuple(weights))
    out = refine_emotion(current, critique)
    assert all(w >= 0.0 for w in out.weights)
    assert abs(sum(out.weights) - 1.0) <= 1e-6


@given(
    positive_weights,
    st.sampled_from(["anger", "happiness", "fear", "disgust", "sadness", "surprise", "neutral"]),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_shift_toward_preserves_simplex(weights, emotion, fraction):
    out = EmotionInstruction(tuple(weights)).shifted_toward(emotion, fraction)
    assert abs(sum(out.weights) - 1.0) <= 1e-6


_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"),
    min_size=1,
    max_size=40,
)


@st.composite
def scripts(draw):
    profile = CharacterProfile(id="p1", name=draw(_text))
    lines = tuple(
        DialogueLine(
            line_id=f"L{i}",
            speaker_id="p1",
            text=draw(_text),
            scene_context=draw(_text),
            emotion=EmotionInstruction(tuple(draw(positive_weights))),
        )
        for i in range(draw(st.integers(1, 3)))
    )
    tracks = []
    for i in range(draw(st.integers(0, 4))):
        kind = draw(st.sampled_from(["speech", "sfx", "bgm"]))
        tracks.append(
            TrackEntry(
                entry_id=f"e{i}",
                kind=kind,
                start_time=draw(st.floats(0, 30)),
                duration=draw(st.floats(0.01, 10)),
                line_id=lines[0].line_id if kind == "speech" else None,
                description=None if kind == "speech" else draw(_text),
                gain_db=draw(st.floats(-60, 12)),
            )
        )
    max_end = max((t.start_time + t.duration for t in tracks), default=0.0)
    return ProductionScript(
        version=draw(st.integers(1, 9)),
        dialogue=DialogueScript(profiles=(profile,), lines=lines),
        tracks=tuple(tracks),
        sample_rate_hz=draw(st.sampled_from([8000, 22050, 48000])),
        master_duration=max_end + draw(st.floats(0, 5)),
    )


@given(scripts())
@settings(max_examples=60)
def test_serialization_round_trip_on_arbitrary_valid_scripts(script):
    assert validate(script) == []
    document = serialize(script)
    again = deserialize(document)
    assert again == script
    assert serialize(again) == document


@given(scripts())
@settings(max_examples=60)
def test_diff_identity_and_membership_symmetry(script):
    assert diff(script, script) == {}
    if script.tracks:
        mutated = script.with_tracks(script.tracks[:-1], bump_version=True)
        assert set(diff(script, mutated)) == set(diff(mutated, script))


@given(st.floats(min_value=-60, max_value=12), st.floats(min_value=-60, max_value=12))
@settings(max_examples=40, deadline=None)  # first example may hit the JIT compile
def test_gain_composition_property(x, y):
    if not (-60 <= x + y <= 12):
        return
    rng = np.random.default_rng(1)
    buf = AudioBuffer(rng.uniform(-0.5, 0.5, 512).astype(np.float32), 8000)
    a = apply_gain(apply_gain(buf, x), y)
    b = apply_gain(buf, x + y)
    assert float(np.max(np.abs(a.samples - b.samples))) <= 1e-6


@given(st.integers(1, 2000), st.sampled_from([4000, 8000, 22050, 48000]),
       st.sampled_from([4000, 8000, 22050, 48000]))
@settings(max_examples=40)
def test_resample_length_rule(n, src, dst):
    buf = AudioBuffer(np.zeros(n, dtype=np.float32), src)
    out = resample(buf, dst)
    if src == dst:
        assert len(out) == n
    else:
        assert len(out) == round(n * dst / src)


@given(scripts())
@settings(max_examples=30)
def test_version_bump_is_exactly_one(script):
    mutated = script.with_tracks(script.tracks, bump_version=True)
    assert mutated.version == script.version + 1
    unchanged = dataclasses.replace(script)
    assert unchanged.version == script.version
