"""Deterministic in-process mock backends.

Every mock is a pure function of (request, seed): identical inputs give
byte-identical outputs across process runs, which is what makes the whole
pipeline testable down to file bytes. Randomness only ever comes from
seeded numpy generators keyed by stable content hashes (crc32/sha256),
never from Python's salted hash().
"""
from __future__ import annotations

import hashlib
import json
import re
import threading
import zlib

import numpy as np

from .base import (
    AlignCritiqueRequest,
    AudioResponse,
    BackendDescriptor,
    BgmRequest,
    CritiqueResponse,
    EmbedRequest,
    EmbedResponse,
    SCALE_COSINE,
    SCALE_MOS,
    SfxRequest,
    SpeechCritiqueRequest,
    TextRequest,
    TextResponse,
    TtsRequest,
)

EMBED_DIM = 64
TTS_RATE = 24000
TTS_CHARS_PER_SECOND = 15.0
SFX_RATE = 22050
BGM_RATE = 24000


def _crc(text: str) -> int:
    return zlib.crc32(text.encode("utf-8")) & 0xFFFFFFFF


def _unit_hash(*parts) -> float:
    """Stable uniform value in [0, 1) from arbitrary printable parts."""
    digest = hashlib.sha256(repr(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


class MockEmbedder:
    """Token-bucket text embedding: lowercase, split on non-alphanumerics,
    crc-hash each token into one of 64 buckets, sum, L2-normalize."""

    backend_id = "mock-embed"

    def handle(self, request: EmbedRequest) -> EmbedResponse:
        vec = np.zeros(EMBED_DIM, dtype=np.float64)
        for token in re.split(r"[^a-z0-9]+", request.text.lower()):
            if token:
                vec[_crc(token) % EMBED_DIM] += 1.0
        norm = float(np.linalg.norm(vec))
        if norm > 0:
            vec /= norm
        return EmbedResponse(vector=vec)


class MockTts:
    """Tone-sequence speech: pitch contour keyed by (voice_id, text hash),
    length proportional to text length at a fixed chars-per-second rate."""

    backend_id = "mock-tts"

    def handle(self, request: TtsRequest) -> AudioResponse:
        n_total = int(round(len(request.text) / TTS_CHARS_PER_SECOND * TTS_RATE))
        if n_total <= 0:
            return AudioResponse(np.zeros(0, dtype=np.float32), TTS_RATE)

        base = 120.0 + (_crc(request.voice_id) % 200)
        words = request.text.split() or [request.text]
        weights = np.array([len(w) + 1 for w in words], dtype=np.float64)
        bounds = np.rint(np.cumsum(weights) / weights.sum() * n_total).astype(np.int64)

        out = np.zeros(n_total, dtype=np.float64)
        start = 0
        for i, word in enumerate(words):
            end = int(bounds[i])
            n = end - start
            if n <= 0:
                continue
            semitones = _crc(f"{word}|{i}|{request.text}") % 12 - 5
            freq = base * 2.0 ** (semitones / 12.0)
            t = np.arange(n) / TTS_RATE
            seg = np.sin(2.0 * np.pi * freq * t)
            edge = min(int(0.01 * TTS_RATE), n // 2)
            if edge:
                ramp = np.linspace(0.0, 1.0, edge)
                seg[:edge] *= ramp
                seg[-edge:] *= ramp[::-1]
            out[start:end] = seg
            start = end
        return AudioResponse((0.35 * out).astype(np.float32), TTS_RATE,
                             metadata={"voice_id": request.voice_id})


class MockSfx:
    """Seeded filtered noise; the seed and the description both matter."""

    backend_id = "mock-sfx"

    def handle(self, request: SfxRequest) -> AudioResponse:
        n = max(int(round(request.target_duration * SFX_RATE)), 1)
        rng = np.random.default_rng([request.seed & 0xFFFFFFFF, _crc(request.description)])
        noise = rng.uniform(-1.0, 1.0, n)
        width = 3 + _crc("smooth|" + request.description) % 38
        kernel = np.ones(width) / width
        shaped = np.convolve(noise, kernel, mode="same")
        peak = np.max(np.abs(shaped)) or 1.0
        return AudioResponse((0.25 * shaped / peak).astype(np.float32), SFX_RATE,
                             metadata={"seed": request.seed})


class MockBgm:
    """Seeded chord loop: a short progression of decaying triads."""

    backend_id = "mock-bgm"
    bar_seconds = 1.6

    def handle(self, request: BgmRequest) -> AudioResponse:
        n = max(int(round(request.target_duration * BGM_RATE)), 1)
        root = 110.0 * 2.0 ** ((_crc(request.description) % 12) / 12.0)
        minor = _crc("mode|" + request.description) & 1
        triad = (0, 3, 7) if minor else (0, 4, 7)
        rng = np.random.default_rng([request.seed & 0xFFFFFFFF, _crc(request.description)])
        progression = rng.permutation(np.array([0, 5, 7, 3]))

        bar_len = int(self.bar_seconds * BGM_RATE)
        out = np.zeros(n, dtype=np.float64)
        for b in range(0, n, bar_len):
            m = min(bar_len, n - b)
            t = np.arange(m) / BGM_RATE
            env = np.exp(-2.0 * t / self.bar_seconds)
            shift = float(progression[(b // bar_len) % len(progression)])
            bar = np.zeros(m, dtype=np.float64)
            for interval in triad:
                bar += np.sin(2.0 * np.pi * root * 2.0 ** ((shift + interval) / 12.0) * t)
            out[b : b + m] = bar * env / len(triad)
        return AudioResponse((0.22 * out).astype(np.float32), BGM_RATE,
                             metadata={"seed": request.seed})


class MockTextModel:
    """Text model following an injectable script of responses.

    `script` maps a request purpose to a FIFO list of canned responses (or is
    a plain list consumed by any purpose). When the script has nothing left
    for a purpose, a deterministic default response is synthesized so the
    full pipeline stays runnable without fixtures.
    """

    backend_id = "mock-text"

    def __init__(self, script=None):
        if isinstance(script, list):
            script = {"*": list(script)}
        self._script = {k: list(v) for k, v in (script or {}).items()}
        self._lock = threading.Lock()

    def handle(self, request: TextRequest) -> TextResponse:
        with self._lock:
            for key in (request.purpose, "*"):
                queue = self._script.get(key)
                if queue:
                    return TextResponse(queue.pop(0))
        return TextResponse(self._default(request))

    def _default(self, request: TextRequest) -> str:
        purpose = request.purpose
        if purpose == "preproduce":
            return self._default_story(request.prompt)
        if purpose == "ambience":
            return self._default_ambience(request.prompt)
        if purpose == "cast":
            m = re.search(r"candidate (\S+):", request.prompt)
            return m.group(1) if m else ""
        if purpose == "rewrite_prompt":
            m = re.search(r"DESCRIPTION: (.+)", request.prompt)
            base = m.group(1).strip() if m else request.prompt.strip()
            return base + ", with rich texture"
        # refine_emotion and anything unscripted: an unusable reply, which
        # exercises the caller's deterministic fallback path.
        return "{}"

    @staticmethod
    def _default_story(prompt: str) -> str:
        names = ["Ada", "Bram", "Cleo", "Dorian", "Esme", "Felix"]
        pick = _crc(prompt)
        hero = names[pick % len(names)]
        doc = {
            "profiles": [
                {"id": "narrator", "name": "Narrator", "gender": "female", "age_band": "adult",
                 "timbre_notes": "warm, steady", "delivery_style": "measured storytelling"},
                {"id": "hero", "name": hero, "gender": "male" if pick % 2 else "female",
                 "age_band": "young", "timbre_notes": "bright, clear",
                 "delivery_style": "animated"},
            ],
            "lines": [
                {"speaker_id": "narrator",
                 "text": "The night settled over the town as our story begins.",
                 "scene_context": "opening scene",
                 "emotion": {"neutral": 1.0}},
                {"speaker_id": "hero",
                 "text": "I never expected any of this to happen.",
                 "scene_context": "opening scene",
                 "emotion": {"surprise": 0.5, "neutral": 0.5}},
                {"speaker_id": "narrator",
                 "text": "But it had, and there was no turning back now.",
                 "scene_context": "rising tension",
                 "emotion": {"fear": 0.2, "neutral": 0.8}},
            ],
        }
        return json.dumps(doc)

    @staticmethod
    def _default_ambience(prompt: str) -> str:
        m = re.search(r"Total duration: ([0-9.]+) seconds", prompt)
        total = float(m.group(1)) if m else 10.0
        plan = [
            {"kind": "bgm", "description": "soft ambient underscore",
             "start_time": 0.0, "duration": round(total, 3)},
            {"kind": "sfx", "description": "gentle room tone swell",
             "start_time": round(min(1.0, total / 2), 3), "duration": 2.0},
        ]
        return json.dumps(plan)


class MockSpeechCritic:
    """MOS-style speech quality critic (1-5 scale).

    With a schedule, scores are consumed FIFO (thread-safe); otherwise the
    score is a stable hash of the audio content and text, landing in
    [3.2, 4.7] so default loops exercise both sides of the usual gate.
    """

    backend_id = "mock-speech-critic"

    def __init__(self, schedule=None):
        self._schedule = list(schedule) if schedule is not None else None
        self._lock = threading.Lock()

    def handle(self, request: SpeechCritiqueRequest) -> CritiqueResponse:
        if self._schedule is not None:
            with self._lock:
                if not self._schedule:
                    raise RuntimeError("speech critic schedule exhausted")
                score = float(self._schedule.pop(0))
            return CritiqueResponse(score=score, scale=SCALE_MOS,
                                    rationale="scheduled verdict")
        u = _unit_hash("speech", zlib.crc32(request.samples.tobytes()), request.text,
                       tuple(round(w, 6) for w in request.emotion_weights))
        score = 3.2 + 1.5 * u
        mood = "confident and clear" if u > 0.5 else "slightly flat delivery"
        return CritiqueResponse(score=round(score, 4), scale=SCALE_MOS,
                                rationale=f"perceived {mood}")


class MockAlignCritic:
    """Text-audio semantic alignment critic on a cosine [-1, 1] scale."""

    backend_id = "mock-align-critic"

    def __init__(self, schedule=None):
        self._schedule = list(schedule) if schedule is not None else None
        self._lock = threading.Lock()

    def handle(self, request: AlignCritiqueRequest) -> CritiqueResponse:
        if self._schedule is not None:
            with self._lock:
                if not self._schedule:
                    raise RuntimeError("align critic schedule exhausted")
                score = float(self._schedule.pop(0))
            return CritiqueResponse(score=score, scale=SCALE_COSINE,
                                    rationale="scheduled verdict")
        u = _unit_hash("align", zlib.crc32(request.samples.tobytes()), request.description)
        return CritiqueResponse(score=round(0.1 + 0.8 * u, 4), scale=SCALE_COSINE,
                                rationale="embedding proximity estimate")


class MockSuite:
    """One mock per capability plus matching in-process descriptors."""

    def __init__(self, text_script=None, speech_schedule=None, align_schedule=None):
        self.text = MockTextModel(script=text_script)
        self.embed = MockEmbedder()
        self.tts = MockTts()
        self.sfx = MockSfx()
        self.bgm = MockBgm()
        self.speech_critic = MockSpeechCritic(schedule=speech_schedule)
        self.align_critic = MockAlignCritic(schedule=align_schedule)

    def mocks(self) -> dict[str, object]:
        return {
            "text": self.text,
            "embed": self.embed,
            "tts": self.tts,
            "sfx": self.sfx,
            "bgm": self.bgm,
            "speech_critic": self.speech_critic,
            "align_critic": self.align_critic,
        }

    def descriptors(self) -> dict[str, BackendDescriptor]:
        return {
            cap: BackendDescriptor(backend_id=impl.backend_id, capability=cap)
            for cap, impl in self.mocks().items()
        }


def mock_suite(**kwargs) -> MockSuite:
    return MockSuite(**kwargs)
