"""Numeric inner loops of the mixer, in two interchangeable flavors.

Every kernel exists as a pure-numpy implementation and a numba @njit
implementation computing the identical per-sample arithmetic (float64
intermediates, float32 storage), so the two paths produce byte-identical
output. Selection happens once at import time:

  * numba is used when available;
  * set STORYMIX_NO_NUMBA=1 to force the numpy path.

`implementations()` exposes both variants regardless of the active choice,
for the equivalence tests and benchmarks/bench_kernels.py.

Trigonometric fade curves are precomputed by the caller and passed in as
arrays, since np.cos and math.cos are not guaranteed bit-identical.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("STORYMIX_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:  # pragma: no cover - exercised implicitly by the import
    if _DISABLE:
        raise ImportError("numba disabled by STORYMIX_NO_NUMBA")
    from numba import njit

    NUMBA_ACTIVE = True
except ImportError:  # pragma: no cover
    NUMBA_ACTIVE = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


# ---------------------------------------------------------------------------
# numpy implementations (reference semantics)
# ---------------------------------------------------------------------------

def _np_mix_add(master: np.ndarray, buf: np.ndarray, start: int) -> None:
    n = min(buf.shape[0], master.shape[0] - start)
    if n <= 0 or start >= master.shape[0]:
        return
    master[start : start + n] += buf[:n]


def _np_resample_linear(src: np.ndarray, n_out: int, ratio: float) -> np.ndarray:
    n_src = src.shape[0]
    if n_out <= 0 or n_src == 0:
        return np.zeros(0, dtype=np.float32)
    if n_src == 1:
        return np.full(n_out, src[0], dtype=np.float32)
    pos = np.arange(n_out, dtype=np.float64) * ratio
    i0 = pos.astype(np.int64)
    tail = i0 >= n_src - 1
    i0c = np.minimum(i0, n_src - 2)
    frac = pos - i0c
    out = src[i0c] * (1.0 - frac) + src[i0c + 1] * frac
    out[tail] = src[n_src - 1]
    return out.astype(np.float32)


def _np_scale(samples: np.ndarray, factor: float) -> np.ndarray:
    return (samples * np.float64(factor)).astype(np.float32)


def _np_peak_abs(samples: np.ndarray) -> float:
    if samples.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(samples)))


def _np_loop_crossfade(
    src: np.ndarray,
    total_len: int,
    step: int,
    copies: int,
    gain_in: np.ndarray,
    gain_out: np.ndarray,
) -> np.ndarray:
    """Lay `copies` copies of src every `step` samples, seams weighted by the
    precomputed equal-power curves, accumulated in float64."""
    n = src.shape[0]
    fade = gain_in.shape[0]
    acc = np.zeros(n + (copies - 1) * step, dtype=np.float64)
    src64 = src.astype(np.float64)
    for c in range(copies):
        w = np.ones(n, dtype=np.float64)
        if c > 0 and fade:
            w[:fade] *= gain_in
        if c < copies - 1 and fade:
            w[n - fade :] *= gain_out
        offset = c * step
        acc[offset : offset + n] += src64 * w
    return acc[:total_len].astype(np.float32)


def _np_fade_out(samples: np.ndarray, ramp: np.ndarray) -> np.ndarray:
    out = samples.copy()
    f = ramp.shape[0]
    if f:
        out[out.shape[0] - f :] = (samples[samples.shape[0] - f :] * ramp).astype(np.float32)
    return out


# ---------------------------------------------------------------------------
# numba implementations (same arithmetic, fused loops)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _nb_mix_add(master, buf, start):  # pragma: no cover - jitted
    n = buf.shape[0]
    m = master.shape[0]
    if start >= m:
        return
    if start + n > m:
        n = m - start
    for i in range(n):
        master[start + i] += buf[i]


@njit(cache=True)
def _nb_resample_linear(src, n_out, ratio):  # pragma: no cover - jitted
    out = np.zeros(n_out, dtype=np.float32)
    n_src = src.shape[0]
    if n_out <= 0 or n_src == 0:
        return out
    if n_src == 1:
        for i in range(n_out):
            out[i] = src[0]
        return out
    for i in range(n_out):
        pos = i * ratio
        i0 = int(pos)
        if i0 >= n_src - 1:
            out[i] = src[n_src - 1]
        else:
            frac = pos - i0
            out[i] = np.float32(src[i0] * (1.0 - frac) + src[i0 + 1] * frac)
    return out


@njit(cache=True)
def _nb_scale(samples, factor):  # pragma: no cover - jitted
    out = np.zeros(samples.shape[0], dtype=np.float32)
    for i in range(samples.shape[0]):
        out[i] = np.float32(samples[i] * factor)
    return out


@njit(cache=True)
def _nb_peak_abs(samples):  # pragma: no cover - jitted
    peak = 0.0
    for i in range(samples.shape[0]):
        v = abs(samples[i])
        if v > peak:
            peak = float(v)
    return peak


@njit(cache=True)
def _nb_loop_crossfade(src, total_len, step, copies, gain_in, gain_out):  # pragma: no cover
    n = src.shape[0]
    fade = gain_in.shape[0]
    acc = np.zeros(n + (copies - 1) * step, dtype=np.float64)
    for c in range(copies):
        offset = c * step
        for j in range(n):
            w = 1.0
            if c > 0 and j < fade:
                w *= gain_in[j]
            if c < copies - 1 and j >= n - fade:
                w *= gain_out[j - (n - fade)]
            acc[offset + j] += src[j] * w
    out = np.zeros(total_len, dtype=np.float32)
    for i in range(total_len):
        out[i] = np.float32(acc[i])
    return out


@njit(cache=True)
def _nb_fade_out(samples, ramp):  # pragma: no cover - jitted
    out = samples.copy()
    f = ramp.shape[0]
    n = samples.shape[0]
    for j in range(f):
        out[n - f + j] = np.float32(samples[n - f + j] * ramp[j])
    return out


_NUMPY_IMPL = {
    "mix_add": _np_mix_add,
    "resample_linear": _np_resample_linear,
    "scale": _np_scale,
    "peak_abs": _np_peak_abs,
    "loop_crossfade": _np_loop_crossfade,
    "fade_out": _np_fade_out,
}

_NUMBA_IMPL = {
    "mix_add": _nb_mix_add,
    "resample_linear": _nb_resample_linear,
    "scale": _nb_scale,
    "peak_abs": _nb_peak_abs,
    "loop_crossfade": _nb_loop_crossfade,
    "fade_out": _nb_fade_out,
}

_ACTIVE = _NUMBA_IMPL if NUMBA_ACTIVE else _NUMPY_IMPL

mix_add = _ACTIVE["mix_add"]
resample_linear = _ACTIVE["resample_linear"]
scale = _ACTIVE["scale"]
peak_abs = _ACTIVE["peak_abs"]
loop_crossfade = _ACTIVE["loop_crossfade"]
fade_out = _ACTIVE["fade_out"]


def implementations() -> dict[str, dict]:
    """Both kernel families, keyed 'numpy' / 'numba' (numba only if importable)."""
    out = {"numpy": dict(_NUMPY_IMPL)}
    if NUMBA_ACTIVE:
        out["numba"] = dict(_NUMBA_IMPL)
    return out
