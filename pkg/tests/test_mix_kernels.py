"""Both kernel flavors must produce byte-identical output."""
import numpy as np
import pytest

from storymix.mix import kernels


def _rng(seed):
    return np.random.default_rng(seed)


needs_both = pytest.mark.skipif(
    "numba" not in kernels.implementations(), reason="numba unavailable"
)


@needs_both
@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_mix_add_paths_match(seed):
    impls = kernels.implementations()
    rng = _rng(seed)
    master_np = rng.standard_normal(5000).astype(np.float32)
    master_nb = master_np.copy()
    buf = rng.standard_normal(1200).astype(np.float32)
    start = int(rng.integers(0, 4800))
    impls["numpy"]["mix_add"](master_np, buf, start)
    impls["numba"]["mix_add"](master_nb, buf, start)
    assert master_np.tobytes() == master_nb.tobytes()


@needs_both
@pytest.mark.parametrize("n_src,n_out,ratio", [(100, 50, 2.0), (50, 173, 50 / 173), (1, 10, 0.1), (4, 2, 2.0)])
def test_resample_paths_match(n_src, n_out, ratio):
    impls = kernels.implementations()
    src = _rng(7).standard_normal(n_src).astype(np.float32)
    a = impls["numpy"]["resample_linear"](src, n_out, ratio)
    b = impls["numba"]["resample_linear"](src, n_out, ratio)
    assert a.tobytes() == b.tobytes()


@needs_both
def test_scale_and_peak_paths_match():
    impls = kernels.implementations()
    src = _rng(11).standard_normal(10000).astype(np.float32)
    for factor in (1.0, 0.5, 10 ** (-60 / 20), 10 ** (6.02 / 20)):
        a = impls["numpy"]["scale"](src, factor)
        b = impls["numba"]["scale"](src, factor)
        assert a.tobytes() == b.tobytes()
    assert impls["numpy"]["peak_abs"](src) == impls["numba"]["peak_abs"](src)
    empty = np.zeros(0, dtype=np.float32)
    assert impls["numpy"]["peak_abs"](empty) == impls["numba"]["peak_abs"](empty) == 0.0


@needs_both
@pytest.mark.parametrize("n,total,fade", [(80, 300, 10), (100, 100, 5), (64, 1000, 63)])
def test_loop_crossfade_paths_match(n, total, fade):
    impls = kernels.implementations()
    src = _rng(13).standard_normal(n).astype(np.float32)
    step = n - fade
    copies = 1 + int(np.ceil((total - n) / step)) if total > n else 1
    t = (np.arange(fade, dtype=np.float64) + 1.0) / (fade + 1.0)
    gain_in = np.sin(0.5 * np.pi * t)
    gain_out = np.cos(0.5 * np.pi * t)
    a = impls["numpy"]["loop_crossfade"](src, total, step, copies, gain_in, gain_out)
    b = impls["numba"]["loop_crossfade"](src, total, step, copies, gain_in, gain_out)
    assert a.tobytes() == b.tobytes()


@needs_both
def test_fade_out_paths_match():
    impls = kernels.implementations()
    src = _rng(17).standard_normal(500).astype(np.float32)
    ramp = (99.0 - np.arange(100, dtype=np.float64)) / 100.0
    a = impls["numpy"]["fade_out"](src, ramp)
    b = impls["numba"]["fade_out"](src, ramp)
    assert a.tobytes() == b.tobytes()
