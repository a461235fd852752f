from .buffer import AudioBuffer
from .engine import (
    PEAK_CEILING,
    Placement,
    RenderResult,
    apply_gain,
    fit_bgm,
    patch,
    prepare_placement,
    render,
    resample,
)
from .wavio import read_wav, write_wav

__all__ = [
    "AudioBuffer",
    "PEAK_CEILING",
    "Placement",
    "RenderResult",
    "apply_gain",
    "fit_bgm",
    "patch",
    "prepare_placement",
    "read_wav",
    "render",
    "resample",
    "write_wav",
]
