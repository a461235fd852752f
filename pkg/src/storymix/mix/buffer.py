"""Mono float32 audio buffer."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class AudioBuffer:
    """Immutable-by-convention mono signal: float32 samples at a fixed rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float32)
        if arr.ndim != 1:
            raise ValueError(f"expected mono 1-D samples, got shape {arr.shape}")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        self.samples = arr

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate_hz

    def copy(self) -> "AudioBuffer":
        return AudioBuffer(self.samples.copy(), self.sample_rate_hz)

    @classmethod
    def silence(cls, duration: float, sample_rate_hz: int) -> "AudioBuffer":
        n = int(round(duration * sample_rate_hz))
        return cls(np.zeros(max(n, 0), dtype=np.float32), sample_rate_hz)

    def raw_bytes(self) -> bytes:
        return self.samples.astype("<f4", copy=False).tobytes()
