from .library import (
    DEFAULT_TOP_K,
    ScoredEntry,
    VoiceEntry,
    VoiceIndex,
    build_index,
    cast_voice,
    profile_query_text,
    semantic_filter,
)
from .manifest import (
    SYNTHETIC_LIBRARY_SIZE,
    load_default_library,
    load_manifest,
    synthetic_entries,
    write_manifest,
)

__all__ = [
    "DEFAULT_TOP_K",
    "SYNTHETIC_LIBRARY_SIZE",
    "ScoredEntry",
    "VoiceEntry",
    "VoiceIndex",
    "build_index",
    "cast_voice",
    "load_default_library",
    "load_manifest",
    "profile_query_text",
    "semantic_filter",
    "synthetic_entries",
    "write_manifest",
]
