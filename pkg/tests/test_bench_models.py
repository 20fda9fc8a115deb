"""
RealAlign: Tests for experiment record models.
"""

import math
import os
import sys

# Make project packages importable without packaging/install
sys.path.insert(0, os.path.abspath("src"))

from ria_bench.models import (  # noqa: E402
    CSV_COLUMNS,
    ExperimentRecord,
    KgProbeRow,
    StreamMetrics,
    SweepResult,
)


def make_stream(stream_id: int, errors: int) -> StreamMetrics:
    return StreamMetrics(
        stream_id=stream_id,
        rx=stream_id % 2,
        errors=errors,
        trials=1000,
        ser=errors / 1000,
        rate_bits=1.5,
        mux=0.25,
        ci_low=0.0,
        ci_high=0.01,
    )


def test_failed_record_keeps_power_and_reason():
    record = ExperimentRecord.failed(1.0e6, "degenerate", Q=12, A=3.5)

    assert record.ok is False
    assert record.err == "degenerate"
    assert record.Q == 12
    assert math.isnan(record.d_min)
    assert math.isnan(record.sum_mux)


def test_csv_row_has_exactly_the_csv_columns():
    record = ExperimentRecord(
        P=1.0e4, Q=3, A=2.0, d_min=0.5, ser=0.0, rate_bits=3.0, mux=0.1, sum_mux=0.2, streams=(make_stream(0, 0),)
    )

    assert tuple(record.csv_row()) == CSV_COLUMNS
    data = record.to_dict()
    assert data["ceiling_ok"] is True
    assert data["streams"][0]["errors"] == 0


def test_sweep_result_counts_failures_and_serializes():
    records = (
        ExperimentRecord(P=1.0e4, Q=3, A=2.0, d_min=0.5, ser=0.01, rate_bits=1.0, mux=0.1, sum_mux=0.1),
        ExperimentRecord.failed(1.0e5, "cap_exceeded", Q=40),
    )
    result = SweepResult(scheme="mac", records=records, slope=None, seed=3, trials=1000, m=2)

    assert result.failures == 1
    data = result.to_dict()
    assert data["slope"] is None
    assert data["records"][1]["err"] == "cap_exceeded"
    assert data["m"] == 2


def test_kg_row_without_a_result_serializes_to_none():
    row = KgProbeRow(index=4, v=(0.5, 0.25), err="cap_exceeded")

    assert row.to_dict() == {
        "index": 4,
        "v": [0.5, 0.25],
        "result": None,
        "err": "cap_exceeded",
        "injected": False,
    }
