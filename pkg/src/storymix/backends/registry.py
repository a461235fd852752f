"""Backend registry assembly from config files and environment overrides."""
from __future__ import annotations

import json
import os
from pathlib import Path

from ..errors import ConfigurationError
from .base import BackendDescriptor, CAPABILITIES
from .gateway import Gateway
from .mocks import MockSuite

ENDPOINT_ENV_PREFIX = "STORYMIX_ENDPOINT_"


def build_gateway(config: dict | None = None, suite: MockSuite | None = None,
                  parallelism: int | None = None, **gateway_kwargs) -> Gateway:
    """Gateway with every capability resolved.

    Defaults to the deterministic mock suite. `config["backends"]` entries
    (keyed by capability) switch individual capabilities to remote_http;
    STORYMIX_ENDPOINT_<CAPABILITY> env vars override endpoints last.
    """
    config = config or {}
    suite = suite or MockSuite()
    gw = Gateway(parallelism=parallelism or int(config.get("parallelism", 4)), **gateway_kwargs)
    gw.register_suite(suite)

    for capability, entry in (config.get("backends") or {}).items():
        if capability not in CAPABILITIES:
            raise ConfigurationError(f"unknown capability {capability!r} in config")
        gw.register(
            BackendDescriptor(
                backend_id=entry.get("backend_id", f"remote-{capability}"),
                capability=capability,
                transport=entry.get("transport", "remote_http"),
                endpoint=entry.get("endpoint"),
                timeout=float(entry.get("timeout", 30.0)),
                max_retries=int(entry.get("max_retries", 2)),
            )
        )

    for capability in CAPABILITIES:
        endpoint = os.environ.get(ENDPOINT_ENV_PREFIX + capability.upper())
        if endpoint:
            base = gw.descriptor_for(capability)
            gw.register(
                BackendDescriptor(
                    backend_id=f"remote-{capability}",
                    capability=capability,
                    transport="remote_http",
                    endpoint=endpoint,
                    timeout=base.timeout,
                    max_retries=base.max_retries,
                )
            )
    return gw


def load_config(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"bad config file {path}: {exc}") from exc
