"""
Event recording for RealAlign runs.

``EventRecorder`` turns run milestones into EventRecords, keeps them in
memory for tests and summaries, and optionally mirrors them to a JSONL file.
It owns no experiment state; callers decide what to record and in which order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Optional
from uuid import uuid4

from ria.channel import ChannelRealization
from ria.errors import Degenerate
from ria.signaling import ReceiverLayout
from .events import (
    EventRecord,
    channel_resampled_event,
    channel_sampled_event,
    kg_sample_event,
    layout_built_event,
    run_finished_event,
    run_started_event,
    sweep_point_event,
)
from .jsonl import EventLogWriter


def new_run_id() -> str:
    return f"run-{uuid4().hex[:12]}"


@dataclass
class EventRecorder:
    """
    In-memory event trail with an optional JSONL mirror.

    ``run_id`` and ``scheme`` stamp every record produced by the ``record_*``
    helpers.
    """

    writer: Optional[EventLogWriter] = None
    run_id: str = field(default_factory=new_run_id)
    scheme: Optional[str] = None
    _buffer: List[EventRecord] = field(default_factory=list)

    @classmethod
    def from_path(cls, path: str | Path, *, run_id: Optional[str] = None, scheme: Optional[str] = None) -> "EventRecorder":
        recorder = cls(writer=EventLogWriter(path), scheme=scheme)
        if run_id:
            recorder.run_id = run_id
        return recorder

    def append(self, event: EventRecord, *, persist: bool = True) -> EventRecord:
        self._buffer.append(event)
        if persist and self.writer is not None:
            self.writer.append(event)
        return event

    def append_many(self, events: Iterable[EventRecord], *, persist: bool = True) -> list[EventRecord]:
        return [self.append(event, persist=persist) for event in events]

    def buffer(self) -> list[EventRecord]:
        return list(self._buffer)

    def clear_buffer(self) -> None:
        self._buffer.clear()

    def persist_buffer(self) -> int:
        """Write the whole buffer to the mirror without clearing it; 0 when there is none."""
        if self.writer is None:
            return 0
        return self.writer.append_many(self._buffer)

    def record_run_started(self, config: Mapping[str, Any], *, command: str) -> EventRecord:
        return self.append(run_started_event(self.run_id, self.scheme, config, command=command))

    def record_run_finished(
        self,
        *,
        reason_code: str = "ok",
        wall_time_s: float = 0.0,
        summary: Optional[Mapping[str, Any]] = None,
    ) -> EventRecord:
        event = run_finished_event(
            self.run_id,
            self.scheme,
            reason_code=reason_code,
            wall_time_s=wall_time_s,
            summary=summary,
        )
        return self.append(event)

    def record_channel(self, h: ChannelRealization, *, attempts: int = 1, source: str = "sampled") -> EventRecord:
        return self.append(channel_sampled_event(self.run_id, h, attempts=attempts, source=source))

    def record_resample(self, attempt: int, seed: int, error: Degenerate) -> EventRecord:
        """Signature matches the ``on_resample`` hook of ``ria.signaling.realize_plan``."""
        event = channel_resampled_event(
            self.run_id,
            self.scheme or "",
            attempt=attempt,
            seed=seed,
            reason_code=error.reason_code,
            message=str(error),
        )
        return self.append(event)

    def record_layouts(self, layouts: Iterable[ReceiverLayout]) -> list[EventRecord]:
        return self.append_many(layout_built_event(self.run_id, self.scheme or "", layout) for layout in layouts)

    def record_sweep_point(self, index: int, row: Mapping[str, Any]) -> EventRecord:
        return self.append(sweep_point_event(self.run_id, self.scheme or "", index, row))

    def record_kg_sample(self, index: int, details: Mapping[str, Any], *, reason_code: str = "ok") -> EventRecord:
        return self.append(kg_sample_event(self.run_id, index, details, reason_code=reason_code))


__all__ = [
    "EventRecorder",
    "new_run_id",
]
