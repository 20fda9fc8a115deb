"""
RealAlign: Tests for CSV artifacts, sweep summaries and run manifests.

These tests verify that:
- the sweep CSV has a fixed header and reparses into the same rows
- reserializing a parsed CSV reproduces it byte for byte
- KG rows serialize failures and results alike
- manifests carry config, seeds and package versions
"""

import json
import math
import os
import sys
from pathlib import Path
from tempfile import TemporaryDirectory

# Make project packages importable without packaging/install
sys.path.insert(0, os.path.abspath("src"))

from ria_bench.models import (  # noqa: E402
    CSV_COLUMNS,
    ExperimentRecord,
    KgProbeRow,
    KgScanResult,
    SweepResult,
)
from ria_bench.reporting import (  # noqa: E402
    KG_CSV_COLUMNS,
    build_manifest,
    kg_csv_text,
    package_versions,
    parse_sweep_csv,
    read_sweep_csv,
    summarize_sweep,
    sweep_csv_text,
    write_manifest,
    write_sweep_csv,
)


def sample_records():
    return [
        ExperimentRecord(
            P=1.0e4, Q=3, A=12.5, d_min=0.1234567891234, ser=0.25, rate_bits=0.5, mux=0.0376, sum_mux=0.0752
        ),
        ExperimentRecord.failed(1.0e5, "cap_exceeded", Q=31, A=4.2),
        ExperimentRecord(
            P=1.0e6, Q=9, A=30.0, d_min=2.0 / 3.0, ser=0.0, rate_bits=6.17, mux=0.31, sum_mux=0.62
        ),
    ]


def test_sweep_csv_header_and_rows():
    text = sweep_csv_text(sample_records())
    lines = text.splitlines()

    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4
    assert lines[1].startswith("10000.0,3,12.5,0.1234567891234,")
    assert lines[2].endswith(",cap_exceeded")
    assert "nan" in lines[2]


def test_sweep_csv_reparses_byte_for_byte():
    text = sweep_csv_text(sample_records())

    parsed = parse_sweep_csv(text)

    assert len(parsed) == 3
    assert parsed[0].d_min == 0.1234567891234
    assert parsed[2].d_min == 2.0 / 3.0
    assert parsed[1].ok is False
    assert math.isnan(parsed[1].ser)
    assert sweep_csv_text(parsed) == text


def test_sweep_csv_file_round_trip():
    records = sample_records()
    with TemporaryDirectory() as tmpdir:
        path = write_sweep_csv(Path(tmpdir) / "out" / "sweep.csv", records)
        loaded = read_sweep_csv(path)

    assert [record.csv_row()["Q"] for record in loaded] == [3, 31, 9]


def test_parse_rejects_a_foreign_header():
    try:
        parse_sweep_csv("P,Q,A\n1,2,3\n")
        raised = False
    except ValueError:
        raised = True

    assert raised is True


def test_kg_csv_serializes_results_and_failures():
    result = KgScanResult(
        v=(1.5, 2.5), m=2, epsilon=0.1, q_range=10, min_normalized=0.25, p=-4, q=(1, 1), zero_hit=False
    )
    rows = [
        KgProbeRow(index=0, v=(1.5, 2.5), result=result),
        KgProbeRow(index=1, v=(0.5, 0.25), err="cap_exceeded", injected=True),
    ]

    lines = kg_csv_text(rows).splitlines()

    assert lines[0] == ",".join(KG_CSV_COLUMNS)
    assert lines[1] == "0,1.5 2.5,0.25,-4,1 1,false,,false"
    assert lines[2] == "1,0.5 0.25,nan,,,,cap_exceeded,true"


def test_summarize_sweep():
    result = SweepResult(scheme="p2p", records=tuple(sample_records()), slope=0.9, seed=1, trials=1000, m=1)

    summary = summarize_sweep(result)

    assert summary.points == 3
    assert summary.failures == 1
    assert summary.slope == 0.9
    assert summary.top_sum_mux == 0.62
    assert summary.all_ceilings_ok is True
    assert summary.to_dict()["top_ser"] == 0.0


def test_manifest_carries_config_seeds_and_versions():
    manifest = build_manifest(
        command="sweep",
        config={"scheme": "p2p", "trials": 1000},
        seeds={"master": 7},
        wall_time_s=1.5,
        run_id="run-test",
        result={"slope": 1.0},
        outputs={"csv": "out.csv"},
    )

    with TemporaryDirectory() as tmpdir:
        path = write_manifest(Path(tmpdir) / "manifest.json", manifest)
        loaded = json.loads(path.read_text(encoding="utf-8"))

    assert loaded["command"] == "sweep"
    assert loaded["config"]["trials"] == 1000
    assert loaded["seeds"] == {"master": 7}
    assert loaded["result"]["slope"] == 1.0
    assert set(loaded["versions"]) == {"python", "numpy", "scipy", "pyyaml"}
    assert set(package_versions()) == set(loaded["versions"])


def test_manifest_writes_non_finite_values_as_null():
    failed = ExperimentRecord.failed(1.0e5, "cap_exceeded", Q=31)
    manifest = build_manifest(
        command="sweep",
        config={"scheme": "p2p"},
        seeds={"master": 0},
        wall_time_s=0.1,
        result={"records": [failed.to_dict()], "top_ser": float("inf"), "pair": (1.0, float("nan"))},
    )

    with TemporaryDirectory() as tmpdir:
        path = write_manifest(Path(tmpdir) / "manifest.json", manifest)
        text = path.read_text(encoding="utf-8")

    assert "NaN" not in text
    assert "Infinity" not in text
    loaded = json.loads(text)
    assert loaded["result"]["records"][0]["d_min"] is None
    assert loaded["result"]["records"][0]["err"] == "cap_exceeded"
    assert loaded["result"]["top_ser"] is None
    assert loaded["result"]["pair"] == [1.0, None]
