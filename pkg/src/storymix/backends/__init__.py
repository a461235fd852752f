from .base import (
    AlignCritiqueRequest,
    AudioResponse,
    BackendDescriptor,
    BgmRequest,
    CAPABILITIES,
    CritiqueResponse,
    EmbedRequest,
    EmbedResponse,
    NormalizedCritique,
    SCALE_COSINE,
    SCALE_MOS,
    SfxRequest,
    SpeechCritiqueRequest,
    TextRequest,
    TextResponse,
    TtsRequest,
    normalize_score,
)
from .gateway import Gateway
from .mocks import MockSuite, mock_suite
from .registry import build_gateway, load_config

__all__ = [
    "AlignCritiqueRequest",
    "AudioResponse",
    "BackendDescriptor",
    "BgmRequest",
    "CAPABILITIES",
    "CritiqueResponse",
    "EmbedRequest",
    "EmbedResponse",
    "Gateway",
    "MockSuite",
    "NormalizedCritique",
    "SCALE_COSINE",
    "SCALE_MOS",
    "SfxRequest",
    "SpeechCritiqueRequest",
    "TextRequest",
    "TextResponse",
    "TtsRequest",
    "build_gateway",
    "load_config",
    "mock_suite",
    "normalize_score",
]
