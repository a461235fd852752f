"""Uniform invocation layer over all model backends.

The gateway owns three cross-cutting policies so nothing else has to:

  * retries with exponential backoff (250 ms base, x2 per attempt, +/-10%
    deterministic jitter) on transport-level failures;
  * critic score normalization onto [0,1] (mos_1_5 via (x-1)/4, cosine via
    (x+1)/2), so loop thresholds live on a single scale;
  * a global parallelism cap shared by every concurrent invoke.

It also counts invocations per capability, which is how tests (and the
refinement economy checks) prove that an edit triggered exactly the
synthesis work it should have.
"""
from __future__ import annotations

import logging
import threading
import time
import zlib
from collections import Counter

from ..errors import BackendUnavailableError, ConfigurationError, TransportError
from .base import BackendDescriptor, CritiqueResponse, normalize_score

log = logging.getLogger(__name__)

BACKOFF_INITIAL_SECONDS = 0.25
BACKOFF_FACTOR = 2.0
BACKOFF_JITTER = 0.1


def _jitter(backend_id: str, attempt: int) -> float:
    # Deterministic +/-10%: keeps delays monotone and tests reproducible.
    u = (zlib.crc32(f"{backend_id}|{attempt}".encode()) % 10_000) / 10_000
    return 1.0 - BACKOFF_JITTER + 2.0 * BACKOFF_JITTER * u


class Gateway:
    def __init__(self, parallelism: int = 4, sleeper=time.sleep, http_transport=None):
        if parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        self.parallelism = parallelism
        self._slots = threading.BoundedSemaphore(parallelism)
        self._sleep = sleeper
        self._http = http_transport
        self._mocks: dict[str, object] = {}
        self._descriptors: dict[str, BackendDescriptor] = {}
        self._counts: Counter = Counter()
        self._count_lock = threading.Lock()

    # -- registry ----------------------------------------------------------

    def register(self, descriptor: BackendDescriptor, impl=None) -> None:
        if descriptor.transport == "in_process_mock" and impl is None:
            raise ConfigurationError(
                f"in-process backend {descriptor.backend_id!r} needs an implementation"
            )
        self._descriptors[descriptor.capability] = descriptor
        if impl is not None:
            self._mocks[descriptor.backend_id] = impl

    def register_suite(self, suite) -> None:
        descriptors = suite.descriptors()
        for capability, impl in suite.mocks().items():
            self.register(descriptors[capability], impl)

    def descriptor_for(self, capability: str) -> BackendDescriptor:
        try:
            return self._descriptors[capability]
        except KeyError:
            raise ConfigurationError(f"no backend registered for capability {capability!r}")

    def resolves(self, *capabilities: str) -> bool:
        return all(c in self._descriptors for c in capabilities)

    # -- invocation --------------------------------------------------------

    def call(self, capability: str, request):
        return self.invoke(self.descriptor_for(capability), request)

    def invoke(self, descriptor: BackendDescriptor, request):
        if request.capability != descriptor.capability:
            raise ConfigurationError(
                f"request capability {request.capability!r} does not match "
                f"descriptor {descriptor.backend_id!r} ({descriptor.capability})"
            )

        last_error = None
        for attempt in range(descriptor.max_retries + 1):
            try:
                with self._slots:
                    response = self._dispatch(descriptor, request)
                with self._count_lock:
                    self._counts[descriptor.capability] += 1
                if isinstance(response, CritiqueResponse):
                    return normalize_score(response)
                return response
            except TransportError as exc:
                last_error = exc
                if attempt < descriptor.max_retries:
                    delay = (
                        BACKOFF_INITIAL_SECONDS
                        * BACKOFF_FACTOR**attempt
                        * _jitter(descriptor.backend_id, attempt)
                    )
                    log.warning(
                        "backend %s attempt %d failed (%s); retrying in %.3fs",
                        descriptor.backend_id, attempt + 1, exc, delay,
                    )
                    self._sleep(delay)
        raise BackendUnavailableError(
            f"backend {descriptor.backend_id!r} failed after "
            f"{descriptor.max_retries + 1} attempts: {last_error}"
        )

    def _dispatch(self, descriptor: BackendDescriptor, request):
        if descriptor.transport == "in_process_mock":
            impl = self._mocks.get(descriptor.backend_id)
            if impl is None:
                raise ConfigurationError(f"no mock registered as {descriptor.backend_id!r}")
            return impl.handle(request)
        if self._http is None:
            from .remote import HttpTransport

            self._http = HttpTransport()
        return self._http.call(descriptor, request)

    # -- accounting --------------------------------------------------------

    def invocation_counts(self) -> dict[str, int]:
        with self._count_lock:
            return dict(self._counts)

    def reset_counts(self) -> None:
        with self._count_lock:
            self._counts.clear()
