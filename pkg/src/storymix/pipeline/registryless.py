"""Default gateway wiring for projects (mocks plus config/env overrides)."""
from __future__ import annotations

from ..backends.registry import build_gateway


def gateway_for_project(config):
    return build_gateway({"backends": config.backends}, parallelism=config.parallelism)
