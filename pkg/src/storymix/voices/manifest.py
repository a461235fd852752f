"""Voice library manifest: file format plus the shipped synthetic library.

The synthetic library enumerates 320 voices over gender x age x timbre x
delivery combinations, each with a templated description and a `tone://`
asset reference that resolves to a deterministic reference tone. It stands
in for a curated sample collection while exercising the same schema.
"""
from __future__ import annotations

import json
import zlib
from importlib import resources
from pathlib import Path

from .library import VoiceEntry

SYNTHETIC_LIBRARY_SIZE = 320

_TIMBRES = ("deep", "bright", "raspy", "warm", "nasal", "breathy", "smooth", "gravelly")
_DELIVERIES = ("measured", "energetic", "soft-spoken", "theatrical", "brisk")
_ACCENTS = (
    "a neutral accent",
    "a slight coastal lilt",
    "a clipped urban cadence",
    "a soft rural drawl",
    "a crisp stage diction",
)
_AGE_WORDS = {"child": "young child's", "young": "youthful", "adult": "adult", "senior": "elderly"}


def synthetic_entries() -> list[VoiceEntry]:
    """The deterministic 320-entry library (2 genders x 4 ages x 8 timbres x 5 deliveries)."""
    entries = []
    idx = 0
    for gender in ("male", "female"):
        for age in ("child", "young", "adult", "senior"):
            for timbre in _TIMBRES:
                for delivery in _DELIVERIES:
                    voice_id = f"v{idx:03d}"
                    accent = _ACCENTS[zlib.crc32(voice_id.encode()) % len(_ACCENTS)]
                    description = (
                        f"A {_AGE_WORDS[age]} {gender} voice, {timbre} in timbre, "
                        f"with a {delivery} delivery and {accent}."
                    )
                    entries.append(
                        VoiceEntry(
                            voice_id=voice_id,
                            audio_asset=f"tone://{voice_id}",
                            description=description,
                            metadata={
                                "gender": gender,
                                "age": age,
                                "timbre": timbre,
                                "delivery": delivery,
                            },
                        )
                    )
                    idx += 1
    assert len(entries) == SYNTHETIC_LIBRARY_SIZE
    return entries


def entries_to_manifest(entries) -> dict:
    return {
        "manifest_version": 1,
        "voices": [
            {
                "voice_id": e.voice_id,
                "audio": e.audio_asset,
                "description": e.description,
                "metadata": dict(e.metadata),
            }
            for e in entries
        ],
    }


def manifest_to_entries(doc: dict) -> list[VoiceEntry]:
    if "voices" not in doc:
        raise ValueError("manifest missing 'voices' list")
    out = []
    for i, v in enumerate(doc["voices"]):
        for key in ("voice_id", "audio", "description"):
            if key not in v:
                raise ValueError(f"voices[{i}] missing {key!r}")
        out.append(
            VoiceEntry(
                voice_id=v["voice_id"],
                audio_asset=v["audio"],
                description=v["description"],
                metadata=dict(v.get("metadata", {})),
            )
        )
    return out


def load_manifest(path) -> list[VoiceEntry]:
    return manifest_to_entries(json.loads(Path(path).read_text()))


def write_manifest(path, entries) -> None:
    Path(path).write_text(
        json.dumps(entries_to_manifest(entries), indent=2, sort_keys=True) + "\n"
    )


def load_default_library() -> list[VoiceEntry]:
    """The packaged synthetic manifest (falls back to regenerating it)."""
    ref = resources.files("storymix.data").joinpath("voice_manifest.json")
    if ref.is_file():
        return manifest_to_entries(json.loads(ref.read_text()))
    return synthetic_entries()
