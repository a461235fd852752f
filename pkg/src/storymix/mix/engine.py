"""Sample-accurate timeline renderer.

Places synthesized assets on the master timeline per the production script,
applies gains, fits BGM to its slot, sums everything in ascending entry_id
order (deterministic float addition) and peak-normalizes on overflow.

`patch` re-renders only the time regions touched by a script diff and is
byte-identical to a full render of the new script; that equality is the
module's central correctness property and what makes targeted regeneration
an optimization rather than a semantic change.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import RenderError
from ..script.diffing import ADDED, REMOVED, diff
from ..script.model import ProductionScript, TrackEntry
from . import kernels
from .buffer import AudioBuffer

SEAM_CROSSFADE_SECONDS = 0.05
BGM_FADE_OUT_SECONDS = 0.5
PEAK_CEILING = 0.999


@dataclass(frozen=True)
class Placement:
    """A prepared contribution: post-gain, post-fit buffer at project rate."""

    entry_id: str
    buffer: AudioBuffer
    start_sample: int

    @property
    def end_sample(self) -> int:
        return self.start_sample + len(self.buffer)


@dataclass
class RenderResult:
    """Master plus the pre-normalization sum needed for byte-exact patching."""

    master: AudioBuffer
    raw: np.ndarray
    peak: float
    scale: float
    placements: dict[str, tuple[int, int]]  # entry_id -> (start_sample, length)

    @property
    def normalized(self) -> bool:
        return self.scale != 1.0


def apply_gain(buffer: AudioBuffer, gain_db: float) -> AudioBuffer:
    if not (-60.0 <= gain_db <= 12.0):
        raise ValueError(f"gain_db {gain_db} outside [-60, +12]")
    factor = 10.0 ** (gain_db / 20.0)
    return AudioBuffer(kernels.scale(buffer.samples, factor), buffer.sample_rate_hz)


def resample(buffer: AudioBuffer, target_rate: int) -> AudioBuffer:
    """Linear-interpolation resampling; identity (byte-exact) on equal rates."""
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    if target_rate == buffer.sample_rate_hz:
        return buffer.copy()
    if len(buffer) == 0:
        return AudioBuffer(np.zeros(0, dtype=np.float32), target_rate)
    n_out = int(round(len(buffer) * target_rate / buffer.sample_rate_hz))
    ratio = buffer.sample_rate_hz / target_rate
    return AudioBuffer(kernels.resample_linear(buffer.samples, n_out, ratio), target_rate)


def _equal_power_curves(fade: int) -> tuple[np.ndarray, np.ndarray]:
    # Interior points only: endpoints stay pure-outgoing / pure-incoming.
    t = (np.arange(fade, dtype=np.float64) + 1.0) / (fade + 1.0)
    return np.sin(0.5 * math.pi * t), np.cos(0.5 * math.pi * t)


def fit_bgm(buffer: AudioBuffer, target_duration: float) -> AudioBuffer:
    """Loop (with 50 ms equal-power seams) or trim to the target, then apply
    a 500 ms linear fade-out at the end."""
    if target_duration <= 0:
        raise ValueError("target_duration must be positive")
    if len(buffer) == 0:
        raise RenderError("cannot fit an empty buffer")

    rate = buffer.sample_rate_hz
    target_len = max(int(round(target_duration * rate)), 1)
    n = len(buffer)

    if n >= target_len:
        content = buffer.samples[:target_len].copy()
    else:
        fade = min(int(round(SEAM_CROSSFADE_SECONDS * rate)), n - 1) if n > 1 else 0
        step = n - fade
        copies = 1 + math.ceil((target_len - n) / step)
        gain_in, gain_out = _equal_power_curves(fade)
        content = kernels.loop_crossfade(buffer.samples, target_len, step, copies, gain_in, gain_out)

    fade_len = min(int(round(BGM_FADE_OUT_SECONDS * rate)), target_len)
    ramp = (fade_len - 1.0 - np.arange(fade_len, dtype=np.float64)) / fade_len
    return AudioBuffer(kernels.fade_out(content, ramp), rate)


def prepare_placement(entry: TrackEntry, asset: AudioBuffer, project_rate: int) -> Placement:
    buf = resample(asset, project_rate)
    if entry.kind == "bgm":
        buf = fit_bgm(buf, entry.duration)
    buf = apply_gain(buf, entry.gain_db)
    return Placement(entry.entry_id, buf, int(round(entry.start_time * project_rate)))


def _sum_placements(master: np.ndarray, placements: list[Placement]) -> None:
    for p in sorted(placements, key=lambda p: p.entry_id):
        kernels.mix_add(master, p.buffer.samples, p.start_sample)


def _finalize(raw: np.ndarray, rate: int, placements: list[Placement]) -> RenderResult:
    peak = kernels.peak_abs(raw)
    if peak > PEAK_CEILING:
        scale = PEAK_CEILING / peak
        master = kernels.scale(raw, scale)
    else:
        scale = 1.0
        master = raw.copy()
    return RenderResult(
        master=AudioBuffer(master, rate),
        raw=raw,
        peak=peak,
        scale=scale,
        placements={p.entry_id: (p.start_sample, len(p.buffer)) for p in placements},
    )


def render(script: ProductionScript, assets: dict[str, AudioBuffer]) -> RenderResult:
    """Full render of the script; every track entry must have an asset."""
    rate = script.sample_rate_hz
    master_len = int(round(script.master_duration * rate))
    raw = np.zeros(master_len, dtype=np.float32)

    placements = []
    for entry in script.tracks:
        if entry.entry_id not in assets:
            raise RenderError(f"no asset for entry {entry.entry_id!r}")
        placements.append(prepare_placement(entry, assets[entry.entry_id], rate))

    _sum_placements(raw, placements)
    return _finalize(raw, rate, placements)


def _merge_intervals(intervals: list[tuple[int, int]]) -> list[tuple[int, int]]:
    merged: list[tuple[int, int]] = []
    for a, b in sorted(intervals):
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


def patch(
    prev: RenderResult,
    old_script: ProductionScript,
    new_script: ProductionScript,
    assets: dict[str, AudioBuffer],
) -> RenderResult:
    """Targeted remix: recompute only regions overlapping changed placements.

    `assets` must cover every entry of the new script (retained assets plus
    whatever was re-synthesized). Output is byte-identical to
    render(new_script, assets).
    """
    rate = new_script.sample_rate_hz
    master_len = int(round(new_script.master_duration * rate))
    if rate != old_script.sample_rate_hz or master_len != prev.raw.shape[0]:
        return render(new_script, assets)

    delta = diff(old_script, new_script)
    if not delta:
        return RenderResult(
            master=prev.master.copy(),
            raw=prev.raw.copy(),
            peak=prev.peak,
            scale=prev.scale,
            placements=dict(prev.placements),
        )

    # Regions touched by the edit: old spans of removed/changed entries plus
    # new spans of added/changed entries.
    prepared: dict[str, Placement] = {}
    intervals: list[tuple[int, int]] = []
    for eid, d in delta.items():
        if d.change != ADDED and eid in prev.placements:
            start, length = prev.placements[eid]
            intervals.append((start, start + length))
        if d.change != REMOVED:
            entry = new_script.entry_by_id(eid)
            if entry.entry_id not in assets:
                raise RenderError(f"no asset for entry {entry.entry_id!r}")
            p = prepare_placement(entry, assets[eid], rate)
            prepared[eid] = p
            intervals.append((p.start_sample, p.end_sample))

    regions = [
        (max(a, 0), min(b, master_len)) for a, b in _merge_intervals(intervals)
    ]
    regions = [(a, b) for a, b in regions if b > a]

    raw = prev.raw.copy()
    for a, b in regions:
        raw[a:b] = 0.0

    # Re-add, in ascending entry_id order, the overlapping part of every
    # new-script placement that intersects an affected region. Placements
    # fully outside the regions keep their contribution from prev.raw.
    placement_spans: dict[str, tuple[int, int]] = {}
    contributors: list[Placement] = []
    for entry in new_script.tracks:
        eid = entry.entry_id
        if eid in prepared:
            p = prepared[eid]
        else:
            start, length = prev.placements[eid]
            placement_spans[eid] = (start, length)
            if not any(start < b and start + length > a for a, b in regions):
                continue
            if eid not in assets:
                raise RenderError(f"no asset for entry {eid!r}")
            p = prepare_placement(entry, assets[eid], rate)
        placement_spans[eid] = (p.start_sample, len(p.buffer))
        contributors.append(p)

    for p in sorted(contributors, key=lambda p: p.entry_id):
        for a, b in regions:
            lo = max(p.start_sample, a)
            hi = min(p.end_sample, b)
            if hi > lo:
                kernels.mix_add(raw, p.buffer.samples[lo - p.start_sample : hi - p.start_sample], lo)

    peak = kernels.peak_abs(raw)
    if peak > PEAK_CEILING:
        scale = PEAK_CEILING / peak
        master = kernels.scale(raw, scale)
    else:
        scale = 1.0
        master = raw.copy()

    return RenderResult(
        master=AudioBuffer(master, rate),
        raw=raw,
        peak=peak,
        scale=scale,
        placements=placement_spans,
    )
