"""Content-addressed audio asset store plus reference-tone resolution.

Assets are keyed by sha256 over (sample rate, raw float32 bytes): identical
audio is stored once, and asset ids double as integrity checks. Voice
library references use the `tone://<voice_id>` scheme, resolved to a
deterministic reference tone so the shipped synthetic library needs no
binary files.
"""
from __future__ import annotations

import hashlib
import zlib
from pathlib import Path

import numpy as np

from ..errors import ProjectError
from ..mix import AudioBuffer, read_wav, write_wav

TONE_SCHEME = "tone://"
TONE_DURATION = 1.0
TONE_RATE = 24000


def asset_id_for(buffer: AudioBuffer) -> str:
    h = hashlib.sha256()
    h.update(str(buffer.sample_rate_hz).encode())
    h.update(buffer.samples.astype("<f4", copy=False).tobytes())
    return f"sha256:{h.hexdigest()}"


def reference_tone(voice_id: str) -> AudioBuffer:
    """Deterministic tone sample standing in for a real voice recording."""
    freq = 120.0 + (zlib.crc32(voice_id.encode()) & 0xFFFFFFFF) % 200
    t = np.arange(int(TONE_DURATION * TONE_RATE)) / TONE_RATE
    envelope = np.minimum(1.0, np.minimum(t, TONE_DURATION - t) / 0.05)
    return AudioBuffer((0.4 * np.sin(2 * np.pi * freq * t) * envelope).astype(np.float32),
                       TONE_RATE)


class AssetStore:
    """Directory-backed content-addressed store with an in-memory cache."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, AudioBuffer] = {}

    def _path(self, asset_id: str) -> Path:
        if not asset_id.startswith("sha256:"):
            raise ProjectError(f"malformed asset id {asset_id!r}")
        return self.root / f"{asset_id.split(':', 1)[1]}.wav"

    def put(self, audio) -> str:
        """Store an AudioBuffer (or backend AudioResponse); returns asset id."""
        if not isinstance(audio, AudioBuffer):
            audio = AudioBuffer(audio.samples, audio.sample_rate_hz)
        asset_id = asset_id_for(audio)
        path = self._path(asset_id)
        if not path.exists():
            write_wav(path, audio, "float32")
        self._cache[asset_id] = audio
        return asset_id

    def get(self, asset_id: str) -> AudioBuffer:
        if asset_id.startswith(TONE_SCHEME):
            return reference_tone(asset_id[len(TONE_SCHEME):])
        cached = self._cache.get(asset_id)
        if cached is not None:
            return cached
        path = self._path(asset_id)
        if not path.exists():
            raise ProjectError(f"asset {asset_id!r} not found under {self.root}")
        buffer = read_wav(path)
        self._cache[asset_id] = buffer
        return buffer

    def exists(self, asset_id: str) -> bool:
        if asset_id.startswith(TONE_SCHEME):
            return True
        return self._path(asset_id).exists()
