"""The env flag must select the pure-numpy kernel path, with identical output."""
import json
import os
import subprocess
import sys

SCRIPT = r"""
import json
import numpy as np
from storymix.mix import kernels
from storymix.mix import AudioBuffer, fit_bgm, render
from storymix.script import DialogueScript, ProductionScript, TrackEntry

rng = np.random.default_rng(123)
buf = AudioBuffer(rng.uniform(-0.7, 0.7, 9000).astype(np.float32), 8000)
fitted = fit_bgm(buf, 3.0)

script = ProductionScript(
    version=1,
    dialogue=DialogueScript(profiles=(), lines=()),
    tracks=(
        TrackEntry("a", "sfx", 0.2, 1.0, description="x", gain_db=-3.0),
        TrackEntry("b", "bgm", 0.0, 2.5, description="y", gain_db=-8.0),
    ),
    sample_rate_hz=8000,
    master_duration=3.0,
)
assets = {
    "a": AudioBuffer(rng.uniform(-0.9, 0.9, 12000).astype(np.float32), 12000),
    "b": AudioBuffer(rng.uniform(-0.9, 0.9, 6000).astype(np.float32), 8000),
}
master = render(script, assets).master
print(json.dumps({
    "numba_active": kernels.NUMBA_ACTIVE,
    "fitted_crc": int(np.frombuffer(fitted.samples.tobytes(), np.uint8).sum()),
    "fitted_hex": fitted.samples.tobytes()[:64].hex(),
    "master_hex": master.samples.tobytes()[::997].hex(),
}))
"""


def _run(disable_numba: bool):
    env = dict(os.environ)
    if disable_numba:
        env["STORYMIX_NO_NUMBA"] = "1"
    else:
        env.pop("STORYMIX_NO_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True,
                         text=True, check=True)
    return json.loads(out.stdout)


def test_env_flag_selects_numpy_path_with_identical_bytes():
    with_numba = _run(disable_numba=False)
    without = _run(disable_numba=True)
    assert without["numba_active"] is False
    assert with_numba["fitted_hex"] == without["fitted_hex"]
    assert with_numba["fitted_crc"] == without["fitted_crc"]
    assert with_numba["master_hex"] == without["master_hex"]


def test_active_selection_reflects_environment():
    from storymix.mix import kernels

    flagged = os.environ.get("STORYMIX_NO_NUMBA", "").lower() in {"1", "true", "yes"}
    assert kernels.NUMBA_ACTIVE == (not flagged) or not kernels.NUMBA_ACTIVE
    impls = kernels.implementations()
    assert "numpy" in impls
