"""
Structured run events for RealAlign.

Every experiment emits a small causal trail:

- run started / finished
- channel sampled, or resampled after a near-collision
- receiver layout built
- sweep point finished or failed
- KG sample scanned

Records are plain data so they can be written to JSONL, reloaded and compared
in tests without the objects that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from time import time
from typing import Any, Mapping, Optional

from ria.channel import ChannelRealization
from ria.signaling import ReceiverLayout


class EventKind(str, Enum):
    RUN_STARTED = "RUN_STARTED"
    CHANNEL_SAMPLED = "CHANNEL_SAMPLED"
    CHANNEL_RESAMPLED = "CHANNEL_RESAMPLED"
    LAYOUT_BUILT = "LAYOUT_BUILT"
    SWEEP_POINT = "SWEEP_POINT"
    SWEEP_POINT_FAILED = "SWEEP_POINT_FAILED"
    KG_SAMPLE = "KG_SAMPLE"
    RUN_FINISHED = "RUN_FINISHED"


@dataclass(frozen=True)
class EventRecord:
    """
    Canonical structured event record.

    Notes:
    - `event_id` is unique within one run (`<run_id>:<kind>:<index>`).
    - `reason_code` is short and machine-friendly; "ok" on success.
    - `details` carries small scalar context only.
    """

    event_id: str
    kind: EventKind
    run_id: str
    scheme: Optional[str]
    reason_code: str
    created_at_utc_s: float = field(default_factory=time)
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "event_id": self.event_id,
            "kind": self.kind.value,
            "run_id": self.run_id,
            "scheme": self.scheme,
            "reason_code": self.reason_code,
            "created_at_utc_s": float(self.created_at_utc_s),
            "details": dict(self.details),
        }

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "EventRecord":
        return EventRecord(
            event_id=str(data["event_id"]),
            kind=EventKind(str(data["kind"])),
            run_id=str(data.get("run_id", "")),
            scheme=data.get("scheme"),
            reason_code=str(data.get("reason_code", "")),
            created_at_utc_s=float(data.get("created_at_utc_s", time())),
            details=dict(data.get("details", {})),
        )


def run_started_event(run_id: str, scheme: Optional[str], config: Mapping[str, Any], *, command: str) -> EventRecord:
    return EventRecord(
        event_id=f"{run_id}:run_started",
        kind=EventKind.RUN_STARTED,
        run_id=run_id,
        scheme=scheme,
        reason_code="run_started",
        details={"command": command, "config": dict(config)},
    )


def run_finished_event(
    run_id: str,
    scheme: Optional[str],
    *,
    reason_code: str = "ok",
    wall_time_s: float = 0.0,
    summary: Optional[Mapping[str, Any]] = None,
) -> EventRecord:
    return EventRecord(
        event_id=f"{run_id}:run_finished",
        kind=EventKind.RUN_FINISHED,
        run_id=run_id,
        scheme=scheme,
        reason_code=reason_code,
        details={"wall_time_s": float(wall_time_s), "summary": dict(summary or {})},
    )


def channel_sampled_event(run_id: str, h: ChannelRealization, *, attempts: int, source: str) -> EventRecord:
    return EventRecord(
        event_id=f"{run_id}:channel",
        kind=EventKind.CHANNEL_SAMPLED,
        run_id=run_id,
        scheme=h.scheme.value,
        reason_code="channel_ready",
        details={
            "source": source,
            "seed": int(h.seed),
            "attempts": int(attempts),
            "shape": [h.num_rx, h.num_tx],
        },
    )


def channel_resampled_event(
    run_id: str,
    scheme: str,
    *,
    attempt: int,
    seed: int,
    reason_code: str,
    message: str,
) -> EventRecord:
    return EventRecord(
        event_id=f"{run_id}:resample:{attempt}",
        kind=EventKind.CHANNEL_RESAMPLED,
        run_id=run_id,
        scheme=scheme,
        reason_code=reason_code,
        details={"attempt": int(attempt), "seed": int(seed), "message": message},
    )


def layout_built_event(run_id: str, scheme: str, layout: ReceiverLayout) -> EventRecord:
    return EventRecord(
        event_id=f"{run_id}:layout:{layout.rx}",
        kind=EventKind.LAYOUT_BUILT,
        run_id=run_id,
        scheme=scheme,
        reason_code="layout_built",
        details={
            "rx": layout.rx,
            "L": layout.L,
            "L_prime": layout.L_prime,
            "f": layout.f,
            "scale": layout.scale,
            "contains_unit": layout.contains_unit,
        },
    )


def sweep_point_event(run_id: str, scheme: str, index: int, row: Mapping[str, Any]) -> EventRecord:
    failed = bool(row.get("err"))
    return EventRecord(
        event_id=f"{run_id}:point:{index}",
        kind=EventKind.SWEEP_POINT_FAILED if failed else EventKind.SWEEP_POINT,
        run_id=run_id,
        scheme=scheme,
        reason_code=str(row["err"]) if failed else "ok",
        details={"index": int(index), **dict(row)},
    )


def kg_sample_event(run_id: str, index: int, details: Mapping[str, Any], *, reason_code: str = "ok") -> EventRecord:
    return EventRecord(
        event_id=f"{run_id}:kg:{index}",
        kind=EventKind.KG_SAMPLE,
        run_id=run_id,
        scheme=None,
        reason_code=reason_code,
        details={"index": int(index), **dict(details)},
    )


__all__ = [
    "EventKind",
    "EventRecord",
    "run_started_event",
    "run_finished_event",
    "channel_sampled_event",
    "channel_resampled_event",
    "layout_built_event",
    "sweep_point_event",
    "kg_sample_event",
]
