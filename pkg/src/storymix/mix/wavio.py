"""Minimal RIFF/WAVE reader and writer (mono, pcm16 or float32)."""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import WavFormatError
from .buffer import AudioBuffer

_FMT_PCM = 1
_FMT_FLOAT = 3


def write_wav(path, buffer: AudioBuffer, bit_depth: str = "float32") -> None:
    """Write a mono WAV. pcm16 quantizes via round(sample*32767), clamped;
    float32 is lossless w.r.t. the buffer samples."""
    if bit_depth == "float32":
        fmt, bits = _FMT_FLOAT, 32
        data = buffer.samples.astype("<f4").tobytes()
    elif bit_depth == "pcm16":
        fmt, bits = _FMT_PCM, 16
        q = np.clip(np.round(buffer.samples.astype(np.float64) * 32767.0), -32768, 32767)
        data = q.astype("<i2").tobytes()
    else:
        raise ValueError(f"unsupported bit_depth {bit_depth!r}")

    rate = buffer.sample_rate_hz
    block_align = bits // 8
    chunks = b"".join(
        [
            b"fmt ",
            struct.pack("<I", 16),
            struct.pack("<HHIIHH", fmt, 1, rate, rate * block_align, block_align, bits),
        ]
    )
    if fmt == _FMT_FLOAT:
        chunks += b"fact" + struct.pack("<II", 4, len(buffer))
    chunks += b"data" + struct.pack("<I", len(data)) + data
    if len(data) % 2:
        chunks += b"\x00"

    payload = b"WAVE" + chunks
    Path(path).write_bytes(b"RIFF" + struct.pack("<I", len(payload)) + payload)


def read_wav(path) -> AudioBuffer:
    blob = Path(path).read_bytes()
    if len(blob) < 12 or blob[:4] != b"RIFF" or blob[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file")

    fmt_fields = None
    data = None
    pos = 12
    while pos + 8 <= len(blob):
        cid = blob[pos : pos + 4]
        (size,) = struct.unpack_from("<I", blob, pos + 4)
        body = blob[pos + 8 : pos + 8 + size]
        if len(body) < size:
            raise WavFormatError(f"{path}: truncated {cid!r} chunk")
        if cid == b"fmt ":
            if size < 16:
                raise WavFormatError(f"{path}: fmt chunk too small")
            fmt_fields = struct.unpack_from("<HHIIHH", body, 0)
        elif cid == b"data":
            data = body
        pos += 8 + size + (size % 2)

    if fmt_fields is None or data is None:
        raise WavFormatError(f"{path}: missing fmt or data chunk")

    audio_format, channels, rate, _, _, bits = fmt_fields
    if channels != 1:
        raise WavFormatError(f"{path}: only mono is supported, got {channels} channels")

    if audio_format == _FMT_FLOAT and bits == 32:
        samples = np.frombuffer(data, dtype="<f4").astype(np.float32)
    elif audio_format == _FMT_PCM and bits == 16:
        ints = np.frombuffer(data, dtype="<i2")
        samples = (ints.astype(np.float64) / 32767.0).astype(np.float32)
    else:
        raise WavFormatError(f"{path}: unsupported encoding (format={audio_format}, bits={bits})")

    return AudioBuffer(samples, int(rate))
