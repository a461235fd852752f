"""Backend protocol types: descriptors, requests and responses.

Every generative or critic model, real or mock, is invoked through the
gateway using these types. Audio crosses the boundary as float32 mono
samples with a declared rate; critic scores carry their native scale and
are normalized to [0,1] by the gateway before reaching any caller.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CAPABILITIES = ("text", "embed", "tts", "sfx", "bgm", "speech_critic", "align_critic")
TRANSPORTS = ("in_process_mock", "remote_http")

SCALE_MOS = "mos_1_5"
SCALE_COSINE = "cosine_neg1_1"

_SCALE_BOUNDS = {SCALE_MOS: (1.0, 5.0), SCALE_COSINE: (-1.0, 1.0)}


@dataclass(frozen=True)
class BackendDescriptor:
    backend_id: str
    capability: str
    transport: str = "in_process_mock"
    endpoint: str | None = None
    timeout: float = 30.0
    max_retries: int = 2

    def __post_init__(self):
        if self.capability not in CAPABILITIES:
            raise ValueError(f"unknown capability {self.capability!r}")
        if self.transport not in TRANSPORTS:
            raise ValueError(f"unknown transport {self.transport!r}")
        if self.transport == "remote_http" and not self.endpoint:
            raise ValueError("remote_http transport requires an endpoint")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


@dataclass(frozen=True)
class TextRequest:
    capability = "text"
    prompt: str
    purpose: str = "general"


@dataclass(frozen=True)
class TextResponse:
    text: str


@dataclass(frozen=True)
class EmbedRequest:
    capability = "embed"
    text: str


@dataclass(frozen=True)
class EmbedResponse:
    vector: np.ndarray


@dataclass(frozen=True)
class TtsRequest:
    """Speech synthesis conditioned on a reference voice and an emotion mix.

    Emotion travels both as the raw 7-vector and as rendered text; which one
    a concrete backend consumes is its own business.
    """

    capability = "tts"
    text: str
    voice_id: str
    voice_asset_ref: str
    emotion_weights: tuple[float, ...]
    emotion_text: str = ""


@dataclass(frozen=True)
class SfxRequest:
    capability = "sfx"
    description: str
    target_duration: float
    seed: int


@dataclass(frozen=True)
class BgmRequest:
    capability = "bgm"
    description: str
    target_duration: float
    seed: int


@dataclass(frozen=True)
class AudioResponse:
    samples: np.ndarray  # float32 mono
    sample_rate_hz: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ValueError("response sample rate must be positive")


@dataclass(frozen=True)
class SpeechCritiqueRequest:
    capability = "speech_critic"
    samples: np.ndarray
    sample_rate_hz: int
    text: str
    emotion_weights: tuple[float, ...]


@dataclass(frozen=True)
class AlignCritiqueRequest:
    capability = "align_critic"
    samples: np.ndarray
    sample_rate_hz: int
    description: str


@dataclass(frozen=True)
class CritiqueResponse:
    """Raw critic verdict in its native scale; bounds-checked on construction."""

    score: float
    scale: str
    rationale: str = ""

    def __post_init__(self):
        lo, hi = _SCALE_BOUNDS[self.scale]
        if not (lo <= self.score <= hi):
            raise ValueError(f"score {self.score} outside {self.scale} bounds [{lo}, {hi}]")


@dataclass(frozen=True)
class NormalizedCritique:
    """Gateway-normalized verdict: score01 always lives on [0,1]."""

    score01: float
    raw_score: float
    scale: str
    rationale: str = ""


def normalize_score(response: CritiqueResponse) -> NormalizedCritique:
    if response.scale == SCALE_MOS:
        score01 = (response.score - 1.0) / 4.0
    else:
        score01 = (response.score + 1.0) / 2.0
    score01 = min(max(score01, 0.0), 1.0)
    return NormalizedCritique(
        score01=score01, raw_score=response.score, scale=response.scale,
        rationale=response.rationale,
    )
