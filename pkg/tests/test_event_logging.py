"""
RealAlign: Tests for structured run events and JSONL logging.

These tests verify that the logging layer can:
- build event records from channel realizations, layouts and sweep rows
- serialize and deserialize event logs safely
- preserve event ordering and core fields across a reload
"""

import os
import sys
from pathlib import Path
from tempfile import TemporaryDirectory

# Make project packages importable without packaging/install
sys.path.insert(0, os.path.abspath("src"))

from ria.channel import ChannelRealization  # noqa: E402
from ria.errors import Degenerate  # noqa: E402
from ria.schemas import Scheme  # noqa: E402
from ria.signaling import build_stream_plan, realize_plan  # noqa: E402
from ria_logging.events import (  # noqa: E402
    EventKind,
    EventRecord,
    channel_sampled_event,
    kg_sample_event,
    layout_built_event,
    run_started_event,
    sweep_point_event,
)
from ria_logging.jsonl import (  # noqa: E402
    EventLogWriter,
    events_of_kind,
    iter_event_log,
    load_event_log,
    write_event_log,
)
from ria_logging.recorder import EventRecorder, new_run_id  # noqa: E402


FIXED_X_GAINS = [[1.2345, 0.8765], [0.6543, 1.4321]]


def two_user_x_plan():
    h = ChannelRealization.from_matrix(Scheme.TWO_USER_X, 2, 2, FIXED_X_GAINS, seed=4)
    return realize_plan(build_stream_plan(Scheme.TWO_USER_X), h=h)


def test_channel_and_layout_events_carry_core_fields():
    realized = two_user_x_plan()

    channel = channel_sampled_event("run-a", realized.h, attempts=1, source="file")
    layout = layout_built_event("run-a", "two-user-x", realized.layouts[0])

    assert channel.kind == EventKind.CHANNEL_SAMPLED
    assert channel.scheme == "two-user-x"
    assert channel.details["seed"] == 4
    assert channel.details["shape"] == [2, 2]
    assert channel.details["source"] == "file"

    assert layout.event_id == "run-a:layout:0"
    assert layout.details["L"] == 2
    assert layout.details["L_prime"] == 1
    assert layout.details["f"] == 2


def test_sweep_point_events_split_on_failure():
    ok = sweep_point_event("run-b", "p2p", 0, {"P": 1.0e4, "Q": 10, "err": ""})
    failed = sweep_point_event("run-b", "p2p", 1, {"P": 1.0e5, "Q": 31, "err": "cap_exceeded"})

    assert ok.kind == EventKind.SWEEP_POINT
    assert ok.reason_code == "ok"
    assert ok.event_id == "run-b:point:0"
    assert failed.kind == EventKind.SWEEP_POINT_FAILED
    assert failed.reason_code == "cap_exceeded"
    assert failed.details["index"] == 1
    assert failed.details["Q"] == 31


def test_event_record_dict_round_trip():
    event = run_started_event("run-c", "gic", {"K": 3, "n": 2}, command="directions")

    restored = EventRecord.from_dict(event.to_dict())

    assert restored == event
    assert restored.details["config"] == {"K": 3, "n": 2}


def test_jsonl_writer_appends_and_reads_back_in_order():
    events = [
        run_started_event("run-d", "p2p", {"trials": 1000}, command="sweep"),
        sweep_point_event("run-d", "p2p", 0, {"P": 1.0e4, "err": ""}),
        kg_sample_event("run-d", 0, {"min_normalized": 0.25}),
    ]

    with TemporaryDirectory() as tmpdir:
        writer = EventLogWriter(Path(tmpdir) / "logs" / "events.jsonl")
        writer.append(events[0])
        assert writer.append_many(events[1:]) == 2
        loaded = writer.read_all()

        assert writer.exists() is True
        assert [event.event_id for event in loaded] == [event.event_id for event in events]
        assert loaded[2].scheme is None

        writer.clear()
        assert writer.read_all() == []


def test_write_event_log_replaces_existing_content():
    first = [run_started_event("run-e", "p2p", {}, command="sweep")]
    second = [kg_sample_event("run-e", 0, {}), kg_sample_event("run-e", 1, {}, reason_code="cap_exceeded")]

    with TemporaryDirectory() as tmpdir:
        path = Path(tmpdir) / "events.jsonl"
        write_event_log(path, first)
        write_event_log(path, second)
        loaded = load_event_log(path)

    assert len(loaded) == 2
    assert len(events_of_kind(loaded, "KG_SAMPLE")) == 2
    assert loaded[1].reason_code == "cap_exceeded"


def test_missing_log_yields_nothing_and_bad_json_raises():
    with TemporaryDirectory() as tmpdir:
        missing = Path(tmpdir) / "absent.jsonl"
        assert list(iter_event_log(missing)) == []

        broken = Path(tmpdir) / "broken.jsonl"
        broken.write_text("{not json}\n", encoding="utf-8")
        try:
            load_event_log(broken)
            raised = False
        except ValueError:
            raised = True

    assert raised is True


def test_recorder_mirrors_to_disk_and_stamps_run_id():
    realized = two_user_x_plan()

    with TemporaryDirectory() as tmpdir:
        path = Path(tmpdir) / "run.jsonl"
        recorder = EventRecorder.from_path(path, run_id="run-f", scheme="two-user-x")
        recorder.record_run_started({"scheme": "two-user-x"}, command="sweep")
        recorder.record_channel(realized.h, source="file")
        recorder.record_layouts(realized.layouts)
        recorder.record_sweep_point(0, {"P": 1.0e4, "err": ""})
        recorder.record_run_finished(wall_time_s=0.5, summary={"points": 1})
        on_disk = load_event_log(path)

    kinds = [event.kind for event in recorder.buffer()]
    assert kinds == [
        EventKind.RUN_STARTED,
        EventKind.CHANNEL_SAMPLED,
        EventKind.LAYOUT_BUILT,
        EventKind.LAYOUT_BUILT,
        EventKind.SWEEP_POINT,
        EventKind.RUN_FINISHED,
    ]
    assert [event.event_id for event in on_disk] == [event.event_id for event in recorder.buffer()]
    assert all(event.run_id == "run-f" for event in on_disk)
    assert on_disk[-1].details["summary"] == {"points": 1}


def test_recorder_without_a_mirror_keeps_events_in_memory():
    recorder = EventRecorder(scheme="gic")

    recorder.record_resample(2, 99, Degenerate("directions collide"))

    assert recorder.run_id.startswith("run-")
    assert recorder.persist_buffer() == 0
    event = recorder.buffer()[0]
    assert event.kind == EventKind.CHANNEL_RESAMPLED
    assert event.reason_code == "degenerate"
    assert event.details == {"attempt": 2, "seed": 99, "message": "directions collide"}

    recorder.clear_buffer()
    assert recorder.buffer() == []
    assert new_run_id() != new_run_id()
