"""Quality-gated synthesis loops: generate, score, gate, refine, keep the best.

Both loop flavors share the same skeleton: attempt N is synthesized, a critic
scores it on [0,1], and if the score clears the threshold the loop stops
early; otherwise the request is refined (emotion for speech, seed/prompt for
non-speech) and retried up to the attempt budget. Whatever happens, the
retained asset is the argmax-score attempt, earliest attempt winning ties.
"""
from __future__ import annotations

import json
import logging
import zlib
from dataclasses import dataclass, field

from ..backends.base import (
    AlignCritiqueRequest,
    BgmRequest,
    SfxRequest,
    SpeechCritiqueRequest,
    TextRequest,
    TtsRequest,
)
from ..errors import LoopError
from ..script.model import EMOTIONS, EmotionInstruction, NEUTRAL_INDEX, TrackEntry

log = logging.getLogger(__name__)

STOP_THRESHOLD_MET = "threshold_met"
STOP_BUDGET_EXHAUSTED = "budget_exhausted"

# Deterministic refine_emotion: this share of the dominant non-neutral weight
# moves onto neutral (intensity damping).
EMOTION_DAMPING = 0.2

# Deterministic prompt rewrites cycle through these qualifiers.
REWRITE_QUALIFIERS = ("with rich detail", "clean high-fidelity recording", "with natural texture")


@dataclass(frozen=True)
class LoopConfig:
    tau_speech: float = 0.625
    tau_ns: float = 0.65
    n_max: int = 3
    refinement_policy: str = "deterministic"  # or "backend_llm"

    def __post_init__(self):
        if not (0.0 <= self.tau_speech <= 1.0 and 0.0 <= self.tau_ns <= 1.0):
            raise ValueError("thresholds must lie in [0, 1]")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.refinement_policy not in ("deterministic", "backend_llm"):
            raise ValueError(f"unknown refinement_policy {self.refinement_policy!r}")


@dataclass(frozen=True)
class AttemptRecord:
    attempt_index: int  # 1-based
    request: dict  # JSON-able snapshot of the synthesis request
    asset_id: str
    score: float
    critique: str = ""
    seed: int | None = None


@dataclass(frozen=True)
class LoopOutcome:
    attempts: tuple[AttemptRecord, ...]
    retained: int  # 1-based index into attempts
    stop_reason: str

    def __post_init__(self):
        object.__setattr__(self, "attempts", tuple(self.attempts))

    @property
    def retained_attempt(self) -> AttemptRecord:
        return self.attempts[self.retained - 1]

    def to_dict(self) -> dict:
        return {
            "attempts": [
                {
                    "attempt_index": a.attempt_index,
                    "request": a.request,
                    "asset_id": a.asset_id,
                    "score": a.score,
                    "critique": a.critique,
                    "seed": a.seed,
                }
                for a in self.attempts
            ],
            "retained": self.retained,
            "stop_reason": self.stop_reason,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "LoopOutcome":
        return cls(
            attempts=tuple(
                AttemptRecord(
                    attempt_index=a["attempt_index"],
                    request=a["request"],
                    asset_id=a["asset_id"],
                    score=a["score"],
                    critique=a.get("critique", ""),
                    seed=a.get("seed"),
                )
                for a in doc["attempts"]
            ),
            retained=doc["retained"],
            stop_reason=doc["stop_reason"],
        )


def _argmax_earliest(scores) -> int:
    """1-based index of the best score; earliest attempt wins ties."""
    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best]:
            best = i
    return best + 1


def derive_seed(entry_id: str) -> int:
    """Stable starting seed for a non-speech entry."""
    return zlib.crc32(entry_id.encode("utf-8")) & 0x7FFFFFFF


def refine_emotion(current: EmotionInstruction, critique: str, policy: str = "deterministic",
                   gateway=None) -> EmotionInstruction:
    """Produce the next attempt's emotion instruction; always valid.

    Deterministic policy damps intensity: 20% of the dominant non-neutral
    weight moves onto neutral. The backend_llm policy asks the text model for
    replacement weights and falls back to the deterministic rule whenever the
    reply is unusable.
    """
    if policy == "backend_llm" and gateway is not None:
        prompt = (
            "A speech clip was scored below the quality gate.\n"
            f"Critique: {critique or '(none)'}\n"
            f"Current emotion weights over {list(EMOTIONS)}: {list(current.weights)}\n"
            "Reply with a JSON array of 7 replacement weights."
        )
        try:
            reply = gateway.call("text", TextRequest(prompt=prompt, purpose="refine_emotion")).text
            weights = json.loads(reply)
            if isinstance(weights, list) and len(weights) == len(EMOTIONS):
                return EmotionInstruction(tuple(float(w) for w in weights))
        except Exception as exc:
            log.debug("backend emotion refinement unusable (%s); using deterministic rule", exc)

    weights = list(current.weights)
    non_neutral = weights[:NEUTRAL_INDEX] + weights[NEUTRAL_INDEX + 1 :]
    if max(non_neutral) <= 0.0:
        return current  # pure neutral is a fixed point
    dominant = max(
        (i for i in range(len(EMOTIONS)) if i != NEUTRAL_INDEX),
        key=lambda i: (weights[i], -i),
    )
    moved = weights[dominant] * EMOTION_DAMPING
    weights[dominant] -= moved
    weights[NEUTRAL_INDEX] += moved
    return EmotionInstruction(tuple(weights))


def _critique_or_zero(gateway, capability: str, request):
    try:
        verdict = gateway.call(capability, request)
        return verdict.score01, verdict.rationale
    except Exception as exc:
        log.warning("critic %s unavailable (%s); scoring attempt 0", capability, exc)
        return 0.0, "critic unavailable"


def run_speech_loop(line, voice, config: LoopConfig, gateway, store) -> LoopOutcome:
    """Synthesize one dialogue line against its quality gate.

    `voice` is the cast VoiceEntry; `store` maps an AudioResponse to an asset
    id and is how retained audio becomes addressable by the mixer.
    """
    emotion = line.emotion
    attempts: list[AttemptRecord] = []

    for n in range(1, config.n_max + 1):
        request = TtsRequest(
            text=line.text,
            voice_id=voice.voice_id,
            voice_asset_ref=voice.audio_asset,
            emotion_weights=emotion.weights,
            emotion_text=emotion.describe(),
        )
        try:
            audio = gateway.call("tts", request)
        except Exception as exc:
            raise LoopError(
                f"speech synthesis failed on attempt {n} for line {line.line_id!r}: {exc}",
                attempts=attempts,
            ) from exc
        asset_id = store(audio)

        score, critique = _critique_or_zero(
            gateway,
            "speech_critic",
            SpeechCritiqueRequest(
                samples=audio.samples,
                sample_rate_hz=audio.sample_rate_hz,
                text=line.text,
                emotion_weights=emotion.weights,
            ),
        )
        attempts.append(
            AttemptRecord(
                attempt_index=n,
                request={
                    "text": request.text,
                    "voice_id": request.voice_id,
                    "voice_asset_ref": request.voice_asset_ref,
                    "emotion_weights": list(request.emotion_weights),
                    "emotion_text": request.emotion_text,
                },
                asset_id=asset_id,
                score=score,
                critique=critique,
            )
        )
        if score >= config.tau_speech:
            break
        if n < config.n_max:
            emotion = refine_emotion(emotion, critique, config.refinement_policy, gateway)

    stop = STOP_THRESHOLD_MET if attempts[-1].score >= config.tau_speech else STOP_BUDGET_EXHAUSTED
    return LoopOutcome(attempts=tuple(attempts), retained=_argmax_earliest(
        [a.score for a in attempts]), stop_reason=stop)


def _rewrite_description(original: str, rewrite_count: int, policy: str, gateway) -> str:
    if policy == "backend_llm" and gateway is not None:
        prompt = (
            "The generated audio did not match its description well. "
            "Rewrite the description to be more concrete.\n"
            f"DESCRIPTION: {original}"
        )
        try:
            reply = gateway.call("text", TextRequest(prompt=prompt, purpose="rewrite_prompt")).text
            reply = reply.strip()
            if reply:
                return reply
        except Exception as exc:
            log.debug("backend prompt rewrite unusable (%s); using deterministic rule", exc)
    qualifier = REWRITE_QUALIFIERS[rewrite_count % len(REWRITE_QUALIFIERS)]
    return f"{original}, {qualifier}"


def run_nonspeech_loop(entry: TrackEntry, config: LoopConfig, gateway, store) -> LoopOutcome:
    """Synthesize one sfx/bgm entry against the alignment gate.

    Failure refinements alternate, cheapest first: odd failures bump the seed
    (seed0 + failure count), even failures rewrite the description.
    """
    if entry.kind not in ("sfx", "bgm"):
        raise ValueError(f"non-speech loop got a {entry.kind!r} entry")
    if not entry.description:
        raise ValueError(f"entry {entry.entry_id!r} has no description")

    seed0 = derive_seed(entry.entry_id)
    seed = seed0
    description = entry.description
    rewrites = 0
    attempts: list[AttemptRecord] = []
    request_cls = SfxRequest if entry.kind == "sfx" else BgmRequest

    for n in range(1, config.n_max + 1):
        request = request_cls(description=description, target_duration=entry.duration, seed=seed)
        try:
            audio = gateway.call(entry.kind, request)
        except Exception as exc:
            raise LoopError(
                f"{entry.kind} synthesis failed on attempt {n} for {entry.entry_id!r}: {exc}",
                attempts=attempts,
            ) from exc
        asset_id = store(audio)

        score, critique = _critique_or_zero(
            gateway,
            "align_critic",
            AlignCritiqueRequest(
                samples=audio.samples,
                sample_rate_hz=audio.sample_rate_hz,
                description=description,
            ),
        )
        attempts.append(
            AttemptRecord(
                attempt_index=n,
                request={
                    "description": description,
                    "target_duration": entry.duration,
                    "seed": seed,
                },
                asset_id=asset_id,
                score=score,
                critique=critique,
                seed=seed,
            )
        )
        if score >= config.tau_ns:
            break
        if n < config.n_max:
            failures = n
            if failures % 2 == 1:
                seed = seed0 + failures
            else:
                description = _rewrite_description(
                    entry.description, rewrites, config.refinement_policy, gateway
                )
                rewrites += 1

    stop = STOP_THRESHOLD_MET if attempts[-1].score >= config.tau_ns else STOP_BUDGET_EXHAUSTED
    return LoopOutcome(attempts=tuple(attempts), retained=_argmax_earliest(
        [a.score for a in attempts]), stop_reason=stop)
