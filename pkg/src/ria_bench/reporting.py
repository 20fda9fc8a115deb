"""
Reporting helpers for RealAlign experiments.

This module provides:
- the sweep CSV (fixed header, one ExperimentRecord per row)
- the KG probe CSV
- the JSON run manifest (config, seeds, package versions, wall time)
- a compact sweep summary for console output and manifests

CSV floats are written with ``repr`` so parsing and re-serializing a file
reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
import platform
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np
import scipy
import yaml

from .models import CSV_COLUMNS, ExperimentRecord, KgProbeRow, SweepResult


KG_CSV_COLUMNS = ("index", "v", "min_normalized", "p", "q", "zero_hit", "err", "injected")


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_rows(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


# ------------------------- #
#         SWEEP CSV         #
# ------------------------- #

def sweep_csv_text(records: Iterable[ExperimentRecord]) -> str:
    return _write_rows(CSV_COLUMNS, ([record.csv_row()[column] for column in CSV_COLUMNS] for record in records))


def write_sweep_csv(path: str | Path, records: Iterable[ExperimentRecord]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(sweep_csv_text(records), encoding="utf-8")
    return target


def parse_sweep_csv(text: str) -> list[ExperimentRecord]:
    """Rows back to records; per-stream details are not part of the CSV."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ValueError(f"sweep CSV header must be {','.join(CSV_COLUMNS)}, got {header}")
    records: list[ExperimentRecord] = []
    for line_number, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise ValueError(f"sweep CSV line {line_number} has {len(row)} fields")
        values = dict(zip(CSV_COLUMNS, row))
        records.append(
            ExperimentRecord(
                P=float(values["P"]),
                Q=int(values["Q"]),
                A=float(values["A"]),
                d_min=float(values["d_min"]),
                ser=float(values["ser"]),
                rate_bits=float(values["rate_bits"]),
                mux=float(values["mux"]),
                sum_mux=float(values["sum_mux"]),
                err=values["err"],
            )
        )
    return records


def read_sweep_csv(path: str | Path) -> list[ExperimentRecord]:
    return parse_sweep_csv(Path(path).read_text(encoding="utf-8"))


# ------------------------- #
#          KG CSV           #
# ------------------------- #

def kg_csv_text(rows: Iterable[KgProbeRow]) -> str:
    def cells(row: KgProbeRow) -> list[Any]:
        v = " ".join(repr(value) for value in row.v)
        if row.result is None:
            return [row.index, v, math.nan, "", "", "", row.err, row.injected]
        result = row.result
        q = " ".join(str(value) for value in result.q)
        return [row.index, v, result.min_normalized, result.p, q, result.zero_hit, row.err, row.injected]

    return _write_rows(KG_CSV_COLUMNS, (cells(row) for row in rows))


def write_kg_csv(path: str | Path, rows: Iterable[KgProbeRow]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(kg_csv_text(rows), encoding="utf-8")
    return target


# ------------------------- #
#      SUMMARY/MANIFEST     #
# ------------------------- #

@dataclass(frozen=True)
class SweepSummary:
    points: int
    failures: int
    slope: Optional[float]
    top_ser: float
    top_sum_mux: float
    all_ceilings_ok: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "points": self.points,
            "failures": self.failures,
            "slope": self.slope,
            "top_ser": float(self.top_ser),
            "top_sum_mux": float(self.top_sum_mux),
            "all_ceilings_ok": bool(self.all_ceilings_ok),
        }


def summarize_sweep(result: SweepResult) -> SweepSummary:
    top = result.records[-1] if result.records else None
    return SweepSummary(
        points=len(result.records),
        failures=result.failures,
        slope=result.slope,
        top_ser=math.nan if top is None else top.ser,
        top_sum_mux=math.nan if top is None else top.sum_mux,
        all_ceilings_ok=all(record.ceiling_ok for record in result.records if record.ok),
    )


def package_versions() -> dict[str, str]:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pyyaml": yaml.__version__,
    }


def build_manifest(
    *,
    command: str,
    config: Mapping[str, Any],
    seeds: Mapping[str, int],
    wall_time_s: float,
    run_id: str = "",
    result: Optional[Mapping[str, Any]] = None,
    outputs: Optional[Mapping[str, str]] = None,
) -> dict[str, Any]:
    return {
        "command": command,
        "run_id": run_id,
        "config": dict(config),
        "seeds": {key: int(value) for key, value in seeds.items()},
        "versions": package_versions(),
        "wall_time_s": float(wall_time_s),
        "result": dict(result or {}),
        "outputs": dict(outputs or {}),
    }


def _json_safe(value: Any) -> Any:
    """Non-finite floats become None so the manifest stays strict JSON."""
    if isinstance(value, Mapping):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_manifest(path: str | Path, manifest: Mapping[str, Any]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_json_safe(manifest), indent=2, sort_keys=True, allow_nan=False)
    target.write_text(text + "\n", encoding="utf-8")
    return target


__all__ = [
    "KG_CSV_COLUMNS",
    "sweep_csv_text",
    "write_sweep_csv",
    "parse_sweep_csv",
    "read_sweep_csv",
    "kg_csv_text",
    "write_kg_csv",
    "SweepSummary",
    "summarize_sweep",
    "package_versions",
    "build_manifest",
    "write_manifest",
]
