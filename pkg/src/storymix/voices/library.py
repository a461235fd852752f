"""Voice library: description-embedding retrieval plus director casting.

Casting is coarse-to-fine: a cosine top-K over description embeddings
produces a high-recall candidate set, then the text backend picks one
candidate in the context of the full dialogue. The index is a plain linear
scan: at library scale (hundreds of entries) exactness beats cleverness and
keeps retrieval oracle-testable.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..backends.base import EmbedRequest, TextRequest
from ..errors import CastingError, IndexBuildError
from ..script.model import CharacterProfile, DialogueScript

log = logging.getLogger(__name__)

DEFAULT_TOP_K = 5


@dataclass(frozen=True)
class VoiceEntry:
    voice_id: str
    audio_asset: str
    description: str
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VoiceIndex:
    """Immutable retrieval index: one embedding per entry, shared dimension."""

    entries: tuple[VoiceEntry, ...]
    vectors: np.ndarray  # (N, D) float64
    embedder_id: str

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        vec = np.asarray(self.vectors, dtype=np.float64)
        vec.setflags(write=False)
        object.__setattr__(self, "vectors", vec)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ScoredEntry:
    entry: VoiceEntry
    similarity: float


def profile_query_text(profile: CharacterProfile) -> str:
    """Fixed retrieval template: gender; age_band; timbre_notes; delivery_style."""
    return "; ".join([profile.gender, profile.age_band, profile.timbre_notes,
                      profile.delivery_style])


def build_index(entries, gateway, max_workers: int | None = None) -> VoiceIndex:
    entries = tuple(entries)
    if not entries:
        raise IndexBuildError("cannot build an index over zero entries")

    seen = set()
    for e in entries:
        if e.voice_id in seen:
            raise IndexBuildError(f"duplicate voice_id {e.voice_id!r}")
        seen.add(e.voice_id)
        if not e.description:
            raise IndexBuildError(f"entry {e.voice_id!r} has an empty description")

    descriptor = gateway.descriptor_for("embed")

    def embed(entry: VoiceEntry) -> np.ndarray:
        try:
            return gateway.invoke(descriptor, EmbedRequest(text=entry.description)).vector
        except Exception as exc:
            raise IndexBuildError(f"embedding failed for {entry.voice_id!r}: {exc}") from exc

    workers = max_workers or gateway.parallelism
    with ThreadPoolExecutor(max_workers=workers) as pool:
        vectors = list(pool.map(embed, entries))

    dim = vectors[0].shape[0]
    for entry, vec in zip(entries, vectors):
        if vec.shape != (dim,):
            raise IndexBuildError(
                f"dimension mismatch for {entry.voice_id!r}: {vec.shape} vs ({dim},)"
            )
    return VoiceIndex(entries=entries, vectors=np.stack(vectors),
                      embedder_id=descriptor.backend_id)


def _cosine_scores(index: VoiceIndex, query: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(index.vectors, axis=1)
    qnorm = float(np.linalg.norm(query))
    denom = norms * qnorm
    safe = np.where(denom > 0, denom, 1.0)
    scores = (index.vectors @ query) / safe
    return np.where(denom > 0, scores, 0.0)


# Scores are quantized before ordering so that mathematically tied entries
# (common with bucket embeddings) compare equal regardless of float summation
# order, making the voice_id tie-break reproducible against any reasonable
# reimplementation. 9 decimals is far below meaningful score gaps and far
# above accumulation noise.
SCORE_DECIMALS = 9


def semantic_filter(index: VoiceIndex, profile: CharacterProfile, k: int = DEFAULT_TOP_K,
                    gateway=None) -> list[ScoredEntry]:
    """Top-K entries by cosine similarity to the profile text; ties resolve by
    ascending voice_id so repeated queries are byte-stable."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if gateway is None:
        raise ValueError("semantic_filter requires a gateway for query embedding")
    query = gateway.call("embed", EmbedRequest(text=profile_query_text(profile))).vector
    scores = [round(float(s), SCORE_DECIMALS) for s in _cosine_scores(index, query)]
    order = sorted(range(len(index)), key=lambda i: (-scores[i], index.entries[i].voice_id))
    return [ScoredEntry(index.entries[i], scores[i]) for i in order[: min(k, len(index))]]


def _casting_prompt(candidates, dialogue: DialogueScript, profile: CharacterProfile) -> str:
    lines = [
        "Pick the single best voice for this character; answer with the candidate id only.",
        f"Character: {profile.name} ({profile_query_text(profile)})",
        "Candidates:",
    ]
    for sc in candidates:
        lines.append(f"candidate {sc.entry.voice_id}: {sc.entry.description}")
    lines.append("Dialogue:")
    for ln in dialogue.lines:
        speaker = dialogue.profile_by_id(ln.speaker_id)
        lines.append(f"  {speaker.name if speaker else ln.speaker_id}: {ln.text}")
    return "\n".join(lines)


def cast_voice(candidates, dialogue: DialogueScript, profile: CharacterProfile,
               gateway) -> VoiceEntry:
    """Fine casting step: delegate the choice to the text backend.

    The returned entry always belongs to the candidate set; an off-list
    answer falls back to the top-ranked candidate with a logged warning.
    """
    candidates = list(candidates)
    if not candidates:
        raise CastingError("cast_voice needs a non-empty candidate set")
    if len(candidates) == 1:
        return candidates[0].entry

    prompt = _casting_prompt(candidates, dialogue, profile)
    try:
        reply = gateway.call("text", TextRequest(prompt=prompt, purpose="cast")).text
    except Exception as exc:
        raise CastingError(f"casting backend failed for {profile.id!r}: {exc}") from exc

    by_id = {sc.entry.voice_id: sc.entry for sc in candidates}
    for token in reply.replace(",", " ").split():
        if token in by_id:
            return by_id[token]
    log.warning(
        "casting backend for %r answered %r, not in the candidate set; "
        "falling back to rank-1 %r",
        profile.id, reply.strip()[:80], candidates[0].entry.voice_id,
    )
    return candidates[0].entry
