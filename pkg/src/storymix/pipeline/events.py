"""Per-project progress event log.

Events carry a monotonically increasing sequence number and are persisted as
JSON lines. Deliberately clock-free: event content is fully determined by
pipeline execution, which keeps project trees byte-reproducible. Readers can
poll `since` or block on `wait` (the long-poll/SSE backend).
"""
from __future__ import annotations

import json
import threading
from pathlib import Path


class EventLog:
    def __init__(self, path):
        self.path = Path(path)
        self._events: list[dict] = []
        self._cond = threading.Condition()
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip():
                    self._events.append(json.loads(line))

    @property
    def last_seq(self) -> int:
        return self._events[-1]["seq"] if self._events else 0

    def emit(self, event_type: str, **payload) -> int:
        with self._cond:
            seq = self.last_seq + 1
            event = {"seq": seq, "type": event_type, **payload}
            self._events.append(event)
            with self.path.open("a") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")
            self._cond.notify_all()
        return seq

    def since(self, after: int = 0) -> list[dict]:
        with self._cond:
            return [e for e in self._events if e["seq"] > after]

    def wait(self, after: int = 0, timeout: float = 25.0) -> list[dict]:
        """Long-poll: block until something newer than `after` exists."""
        deadline = timeout
        with self._cond:
            if not any(e["seq"] > after for e in self._events):
                self._cond.wait(timeout=deadline)
            return [e for e in self._events if e["seq"] > after]
