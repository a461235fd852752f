#!/usr/bin/env python3
"""Benchmark the mixer kernels: numba @njit vs the pure-numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--seconds 120] [--rate 48000] [--repeat 5]

Times each kernel on a master-buffer-scale workload and prints a comparison
table. The numba column is absent when numba is unavailable (or disabled via
STORYMIX_NO_NUMBA=1, in which case both columns would be the same code).
"""
import argparse
import math
import time

import numpy as np

from storymix.mix import kernels


def make_workload(seconds: float, rate: int):
    rng = np.random.default_rng(7)
    master_len = int(seconds * rate)
    master = np.zeros(master_len, dtype=np.float32)
    clips = [rng.uniform(-0.8, 0.8, int(rng.uniform(0.5, 4.0) * rate)).astype(np.float32)
             for _ in range(40)]
    starts = [int(rng.uniform(0, seconds * 0.9) * rate) for _ in clips]
    src = rng.uniform(-0.9, 0.9, int(2.0 * 24000)).astype(np.float32)
    fade = int(0.05 * rate)
    t = (np.arange(fade, dtype=np.float64) + 1.0) / (fade + 1.0)
    gain_in, gain_out = np.sin(0.5 * math.pi * t), np.cos(0.5 * math.pi * t)
    target = int(seconds * rate)
    step = len(src) - fade
    copies = 1 + math.ceil((target - len(src)) / step)
    ramp = (fade - 1.0 - np.arange(fade, dtype=np.float64)) / fade
    return {
        "mix_add": lambda impl: [impl(master.copy(), clip, start)
                                 for clip, start in zip(clips, starts)],
        "resample_linear": lambda impl: impl(src, int(len(src) * rate / 24000), 24000 / rate),
        "scale": lambda impl: impl(master, 0.71),
        "peak_abs": lambda impl: impl(master),
        "loop_crossfade": lambda impl: impl(src, target, step, copies, gain_in, gain_out),
        "fade_out": lambda impl: impl(master, ramp),
    }


def time_kernel(fn, impl, repeat: int) -> float:
    fn(impl)  # warm-up (JIT compile for the numba flavor)
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn(impl)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seconds", type=float, default=120.0,
                        help="master buffer length in seconds")
    parser.add_argument("--rate", type=int, default=48000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    impls = kernels.implementations()
    workload = make_workload(args.seconds, args.rate)

    flavors = list(impls)
    header = f"{'kernel':<18}" + "".join(f"{fl + ' (ms)':>14}" for fl in flavors)
    if len(flavors) == 2:
        header += f"{'speedup':>10}"
    print(f"workload: {args.seconds:.0f}s master at {args.rate} Hz, "
          f"best of {args.repeat} runs")
    print(header)
    print("-" * len(header))
    for name, fn in workload.items():
        times = {fl: time_kernel(fn, impls[fl][name], args.repeat) for fl in flavors}
        row = f"{name:<18}" + "".join(f"{times[fl] * 1e3:>14.3f}" for fl in flavors)
        if len(flavors) == 2:
            row += f"{times['numpy'] / times['numba']:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
