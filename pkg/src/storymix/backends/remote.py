"""HTTP wire protocol for remote model services.

One endpoint per capability: POST {endpoint}/v1/{capability} with a JSON
body, JSON back. Audio crosses the wire as base64-encoded little-endian
float32 PCM plus a declared sample rate. Errors use the envelope
{"error": {"code": ..., "message": ...}}; code "unavailable" is retryable.
Field-level layout is documented in docs/remote-protocol.md and kept
bit-exact by the codec tests.
"""
from __future__ import annotations

import base64

import numpy as np
from fastapi import FastAPI, Request

from ..errors import ProtocolError, TransportError
from .base import (
    AlignCritiqueRequest,
    AudioResponse,
    BackendDescriptor,
    BgmRequest,
    CritiqueResponse,
    EmbedRequest,
    EmbedResponse,
    SfxRequest,
    SpeechCritiqueRequest,
    TextRequest,
    TextResponse,
    TtsRequest,
)

PROTOCOL_VERSION = 1


def encode_audio(samples: np.ndarray) -> str:
    return base64.b64encode(np.asarray(samples, dtype="<f4").tobytes()).decode("ascii")


def decode_audio(payload: str) -> np.ndarray:
    try:
        raw = base64.b64decode(payload.encode("ascii"), validate=True)
    except Exception as exc:
        raise ProtocolError(f"bad base64 audio payload: {exc}") from exc
    if len(raw) % 4:
        raise ProtocolError("audio payload length is not a multiple of 4 bytes")
    return np.frombuffer(raw, dtype="<f4").astype(np.float32)


def request_to_wire(request) -> dict:
    body = {"protocol_version": PROTOCOL_VERSION}
    if isinstance(request, TextRequest):
        body.update(prompt=request.prompt, purpose=request.purpose)
    elif isinstance(request, EmbedRequest):
        body.update(text=request.text)
    elif isinstance(request, TtsRequest):
        body.update(
            text=request.text,
            voice_id=request.voice_id,
            voice_asset_ref=request.voice_asset_ref,
            emotion_weights=list(request.emotion_weights),
            emotion_text=request.emotion_text,
        )
    elif isinstance(request, (SfxRequest, BgmRequest)):
        body.update(
            description=request.description,
            target_duration=request.target_duration,
            seed=request.seed,
        )
    elif isinstance(request, SpeechCritiqueRequest):
        body.update(
            audio_b64=encode_audio(request.samples),
            sample_rate_hz=request.sample_rate_hz,
            text=request.text,
            emotion_weights=list(request.emotion_weights),
        )
    elif isinstance(request, AlignCritiqueRequest):
        body.update(
            audio_b64=encode_audio(request.samples),
            sample_rate_hz=request.sample_rate_hz,
            description=request.description,
        )
    else:
        raise ProtocolError(f"unsupported request type {type(request).__name__}")
    return body


def request_from_wire(capability: str, body: dict):
    try:
        if capability == "text":
            return TextRequest(prompt=body["prompt"], purpose=body.get("purpose", "general"))
        if capability == "embed":
            return EmbedRequest(text=body["text"])
        if capability == "tts":
            return TtsRequest(
                text=body["text"],
                voice_id=body["voice_id"],
                voice_asset_ref=body.get("voice_asset_ref", ""),
                emotion_weights=tuple(body["emotion_weights"]),
                emotion_text=body.get("emotion_text", ""),
            )
        if capability in ("sfx", "bgm"):
            cls = SfxRequest if capability == "sfx" else BgmRequest
            return cls(
                description=body["description"],
                target_duration=float(body["target_duration"]),
                seed=int(body["seed"]),
            )
        if capability == "speech_critic":
            return SpeechCritiqueRequest(
                samples=decode_audio(body["audio_b64"]),
                sample_rate_hz=int(body["sample_rate_hz"]),
                text=body.get("text", ""),
                emotion_weights=tuple(body.get("emotion_weights", ())),
            )
        if capability == "align_critic":
            return AlignCritiqueRequest(
                samples=decode_audio(body["audio_b64"]),
                sample_rate_hz=int(body["sample_rate_hz"]),
                description=body["description"],
            )
    except KeyError as exc:
        raise ProtocolError(f"{capability} request missing field {exc}") from exc
    raise ProtocolError(f"unknown capability {capability!r}")


def response_to_wire(response) -> dict:
    body = {"protocol_version": PROTOCOL_VERSION}
    if isinstance(response, TextResponse):
        body.update(text=response.text)
    elif isinstance(response, EmbedResponse):
        body.update(vector=[float(x) for x in response.vector])
    elif isinstance(response, AudioResponse):
        body.update(
            audio_b64=encode_audio(response.samples),
            sample_rate_hz=response.sample_rate_hz,
            metadata=response.metadata,
        )
    elif isinstance(response, CritiqueResponse):
        body.update(score=response.score, scale=response.scale, rationale=response.rationale)
    else:
        raise ProtocolError(f"unsupported response type {type(response).__name__}")
    return body


def response_from_wire(capability: str, body: dict):
    try:
        if capability == "text":
            return TextResponse(text=body["text"])
        if capability == "embed":
            return EmbedResponse(vector=np.asarray(body["vector"], dtype=np.float64))
        if capability in ("tts", "sfx", "bgm"):
            rate = int(body["sample_rate_hz"])
            if rate <= 0:
                raise ProtocolError("response sample_rate_hz must be positive")
            return AudioResponse(
                samples=decode_audio(body["audio_b64"]),
                sample_rate_hz=rate,
                metadata=body.get("metadata", {}),
            )
        if capability in ("speech_critic", "align_critic"):
            try:
                return CritiqueResponse(
                    score=float(body["score"]),
                    scale=body["scale"],
                    rationale=body.get("rationale", ""),
                )
            except (ValueError, KeyError) as exc:
                raise ProtocolError(f"bad critique response: {exc}") from exc
    except KeyError as exc:
        raise ProtocolError(f"{capability} response missing field {exc}") from exc
    raise ProtocolError(f"unknown capability {capability!r}")


class HttpTransport:
    """POSTs wire-format requests; raises TransportError for retryable
    failures and ProtocolError for malformed traffic."""

    def __init__(self, post=None):
        self._post = post or self._default_post

    @staticmethod
    def _default_post(url: str, json_body: dict, timeout: float):
        import httpx

        try:
            resp = httpx.post(url, json=json_body, timeout=timeout)
        except httpx.HTTPError as exc:
            raise TransportError(f"POST {url} failed: {exc}") from exc
        return resp.status_code, resp.json() if resp.content else {}

    def call(self, descriptor: BackendDescriptor, request):
        url = descriptor.endpoint.rstrip("/") + f"/v1/{descriptor.capability}"
        status, body = self._post(url, request_to_wire(request), descriptor.timeout)

        if status >= 500:
            raise TransportError(f"{url} returned {status}")
        if status >= 400:
            err = (body or {}).get("error", {})
            code = err.get("code", "unknown")
            message = err.get("message", f"HTTP {status}")
            if code == "unavailable":
                raise TransportError(f"{url}: {message}")
            raise ProtocolError(f"{url}: {code}: {message}")
        if not isinstance(body, dict):
            raise ProtocolError(f"{url}: non-object response body")
        return response_from_wire(descriptor.capability, body)


def build_backend_app(suite):
    """Reference ASGI shim exposing a mock suite over the wire protocol.

    Useful both as an integration-test server and as a template for wrapping
    real model services.
    """
    from fastapi.responses import JSONResponse

    app = FastAPI(title="storymix backend shim")
    mocks = suite.mocks()

    @app.post("/v1/{capability}")
    async def invoke(capability: str, request: Request):
        body = await request.json()
        impl = mocks.get(capability)
        if impl is None:
            return JSONResponse(
                status_code=404,
                content={"error": {"code": "no_such_capability", "message": capability}},
            )
        try:
            parsed = request_from_wire(capability, body)
            response = impl.handle(parsed)
        except ProtocolError as exc:
            return JSONResponse(
                status_code=400,
                content={"error": {"code": "bad_request", "message": str(exc)}},
            )
        return JSONResponse(content=response_to_wire(response))

    return app
