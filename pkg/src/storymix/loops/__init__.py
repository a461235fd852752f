from .engine import (
    AttemptRecord,
    EMOTION_DAMPING,
    LoopConfig,
    LoopOutcome,
    STOP_BUDGET_EXHAUSTED,
    STOP_THRESHOLD_MET,
    derive_seed,
    refine_emotion,
    run_nonspeech_loop,
    run_speech_loop,
)

__all__ = [
    "AttemptRecord",
    "EMOTION_DAMPING",
    "LoopConfig",
    "LoopOutcome",
    "STOP_BUDGET_EXHAUSTED",
    "STOP_THRESHOLD_MET",
    "derive_seed",
    "refine_emotion",
    "run_nonspeech_loop",
    "run_speech_loop",
]
