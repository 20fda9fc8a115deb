"""
Newline-delimited JSON event logs for RealAlign runs.

One line per EventRecord, keys sorted and separators compact, so two logs of
the same run differ only in timestamps. The CLI appends to a log named by
``--event-log``; tests read logs back with ``load_event_log``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from .events import EventKind, EventRecord


class EventLogWriter:
    """Appends EventRecords to one JSONL file, creating parent directories on demand."""

    def __init__(self, path: str | Path) -> None:
        self._path = Path(path)

    @property
    def path(self) -> Path:
        return self._path

    def ensure_parent_dir(self) -> None:
        self._path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: EventRecord) -> None:
        self.append_many((event,))

    def append_many(self, events: Iterable[EventRecord]) -> int:
        """Append events in order and return how many were written."""
        self.ensure_parent_dir()
        lines = [_encode_event(event) + "\n" for event in events]
        with self._path.open("a", encoding="utf-8") as handle:
            handle.writelines(lines)
        return len(lines)

    def exists(self) -> bool:
        return self._path.exists()

    def read_all(self) -> list[EventRecord]:
        return load_event_log(self._path)

    def clear(self) -> None:
        self.ensure_parent_dir()
        self._path.write_text("", encoding="utf-8")


def iter_event_log(path: str | Path) -> Iterator[EventRecord]:
    """Yield records from a JSONL log; a missing file yields nothing, blank lines are skipped."""
    log_path = Path(path)
    if not log_path.exists():
        return
    with log_path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                payload = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ValueError(f"invalid JSON in event log at line {line_number}: {log_path}") from exc
            if not isinstance(payload, dict):
                raise ValueError(f"event log line {line_number} is not a JSON object: {log_path}")
            yield EventRecord.from_dict(payload)


def load_event_log(path: str | Path) -> list[EventRecord]:
    return list(iter_event_log(path))


def write_event_log(path: str | Path, events: Iterable[EventRecord]) -> int:
    """Replace the log at ``path`` with exactly ``events``."""
    writer = EventLogWriter(path)
    writer.clear()
    return writer.append_many(events)


def events_of_kind(events: Iterable[EventRecord], kind: EventKind | str) -> list[EventRecord]:
    wanted = EventKind(kind)
    return [event for event in events if event.kind == wanted]


def _encode_event(event: EventRecord) -> str:
    return json.dumps(
        event.to_dict(),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )


__all__ = [
    "EventLogWriter",
    "iter_event_log",
    "load_event_log",
    "write_event_log",
    "events_of_kind",
]
