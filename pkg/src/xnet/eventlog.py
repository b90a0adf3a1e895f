"""Structured event log: the system's single serialized record stream.

Every record is one JSON-serializable dict ``{"index", "tick", "kind",
"detail"}``. Appends are atomic and ordered; subscribers receive records
in append order. The log is the surface the scenario assertions and the
/events stream read from.
"""

from __future__ import annotations

import json
import threading
from collections.abc import Callable


class EventLog:
    def __init__(self, sink: Callable[[str], None] | None = None):
        self._lock = threading.Lock()
        self._records: list[dict] = []
        self._subscribers: list["LogCursor"] = []
        self._sink = sink

    def append(self, kind: str, detail: dict | None = None, tick: int = 0) -> dict:
        record = {"index": 0, "tick": tick, "kind": kind, "detail": detail or {}}
        with self._lock:
            record["index"] = len(self._records)
            self._records.append(record)
            subscribers = list(self._subscribers)
        if self._sink is not None:
            self._sink(json.dumps(record, sort_keys=True))
        for cursor in subscribers:
            cursor._push(record)
        return record

    def append_atomically(self, kind: str, detail: dict | None, tick: int,
                          action: Callable[[], None]) -> dict:
        """Run ``action`` and append its record under the same lock slot.

        Used where a state change and its record must be adjacent in the
        stream (e.g. enqueueing a request and logging its receipt).
        """
        with self._lock:
            action()
            record = {"index": len(self._records), "tick": tick, "kind": kind,
                      "detail": detail or {}}
            self._records.append(record)
            subscribers = list(self._subscribers)
        if self._sink is not None:
            self._sink(json.dumps(record, sort_keys=True))
        for cursor in subscribers:
            cursor._push(record)
        return record

    def records(self) -> list[dict]:
        with self._lock:
            return list(self._records)

    def subscribe(self, replay: bool = False) -> "LogCursor":
        cursor = LogCursor()
        with self._lock:
            if replay:
                for record in self._records:
                    cursor._push(record)
            self._subscribers.append(cursor)
        return cursor

    def unsubscribe(self, cursor: "LogCursor") -> None:
        with self._lock:
            if cursor in self._subscribers:
                self._subscribers.remove(cursor)

    def write_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for record in self.records():
                fh.write(json.dumps(record, sort_keys=True) + "\n")


class LogCursor:
    """Blocking consumer handle over the record stream."""

    def __init__(self):
        self._cond = threading.Condition()
        self._queue: list[dict] = []

    def _push(self, record: dict) -> None:
        with self._cond:
            self._queue.append(record)
            self._cond.notify_all()

    def get(self, timeout: float | None = None) -> dict | None:
        with self._cond:
            if not self._queue and not self._cond.wait_for(lambda: self._queue, timeout):
                return None
            return self._queue.pop(0)
