"""
Experiment records for RealAlign.

This module defines the result structures shared by the sweep runner, the KG
probe and the reporting helpers:

- per-stream Monte Carlo metrics
- one ExperimentRecord per transmit power (one CSV row)
- the sweep result with its fitted slope
- KG scan results and their probe summary

Design goals:
- plain frozen data with ``to_dict`` for manifests and event logs
- CSV columns derived in one place so serialization stays byte-stable
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional


CSV_COLUMNS = ("P", "Q", "A", "d_min", "ser", "rate_bits", "mux", "sum_mux", "err")


@dataclass(frozen=True)
class StreamMetrics:
    """Symbol errors and derived rates of one stream at one transmit power."""

    stream_id: int
    rx: int
    errors: int
    trials: int
    ser: float
    rate_bits: float
    mux: float
    ci_low: float
    ci_high: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "stream_id": self.stream_id,
            "rx": self.rx,
            "errors": int(self.errors),
            "trials": int(self.trials),
            "ser": float(self.ser),
            "rate_bits": float(self.rate_bits),
            "mux": float(self.mux),
            "ci_low": float(self.ci_low),
            "ci_high": float(self.ci_high),
        }


@dataclass(frozen=True)
class ExperimentRecord:
    """
    One transmit power of a DOF sweep.

    ``ser`` and ``mux`` are per-stream means, ``rate_bits`` and ``sum_mux``
    are sums over streams. A failed point keeps whatever it computed before
    failing and carries the reason code in ``err``.
    """

    P: float
    Q: int
    A: float
    d_min: float
    ser: float
    rate_bits: float
    mux: float
    sum_mux: float
    err: str = ""
    streams: tuple[StreamMetrics, ...] = ()
    ceiling_ok: bool = True

    @property
    def ok(self) -> bool:
        return not self.err

    @staticmethod
    def failed(P: float, reason_code: str, *, Q: int = 0, A: float = math.nan) -> "ExperimentRecord":
        return ExperimentRecord(
            P=float(P),
            Q=int(Q),
            A=float(A),
            d_min=math.nan,
            ser=math.nan,
            rate_bits=math.nan,
            mux=math.nan,
            sum_mux=math.nan,
            err=reason_code,
        )

    def csv_row(self) -> dict[str, Any]:
        return {
            "P": float(self.P),
            "Q": int(self.Q),
            "A": float(self.A),
            "d_min": float(self.d_min),
            "ser": float(self.ser),
            "rate_bits": float(self.rate_bits),
            "mux": float(self.mux),
            "sum_mux": float(self.sum_mux),
            "err": self.err,
        }

    def to_dict(self) -> dict[str, Any]:
        data = self.csv_row()
        data["ceiling_ok"] = bool(self.ceiling_ok)
        data["streams"] = [stream.to_dict() for stream in self.streams]
        return data


@dataclass(frozen=True)
class SweepResult:
    scheme: str
    records: tuple[ExperimentRecord, ...]
    slope: Optional[float]
    seed: int
    trials: int
    m: int
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return sum(1 for record in self.records if not record.ok)

    def to_dict(self) -> dict[str, Any]:
        return {
            "scheme": self.scheme,
            "slope": self.slope,
            "seed": int(self.seed),
            "trials": int(self.trials),
            "m": int(self.m),
            "failures": self.failures,
            "records": [record.to_dict() for record in self.records],
            "details": dict(self.details),
        }


@dataclass(frozen=True)
class KgScanResult:
    """
    Exhaustive scan of |p + q . g(v)| * max|q_i|^(m + eps) over one integer box.

    ``p`` and ``q`` are the minimizing integers; ``zero_hit`` flags an exact
    rational dependence found inside the box.
    """

    v: tuple[float, ...]
    m: int
    epsilon: float
    q_range: int
    min_normalized: float
    p: int
    q: tuple[int, ...]
    zero_hit: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "v": list(self.v),
            "m": self.m,
            "epsilon": float(self.epsilon),
            "q_range": self.q_range,
            "min_normalized": float(self.min_normalized),
            "p": self.p,
            "q": list(self.q),
            "zero_hit": bool(self.zero_hit),
        }


@dataclass(frozen=True)
class KgProbeRow:
    index: int
    v: tuple[float, ...]
    result: Optional[KgScanResult] = None
    err: str = ""
    injected: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "v": list(self.v),
            "result": None if self.result is None else self.result.to_dict(),
            "err": self.err,
            "injected": self.injected,
        }


@dataclass(frozen=True)
class KgSummary:
    samples: int
    failures: int
    zero_hits: int
    min_normalized: float
    q10: float
    q50: float
    q90: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "samples": self.samples,
            "failures": self.failures,
            "zero_hits": self.zero_hits,
            "min_normalized": float(self.min_normalized),
            "q10": float(self.q10),
            "q50": float(self.q50),
            "q90": float(self.q90),
        }


@dataclass(frozen=True)
class ScalingProbeResult:
    """Per-sample log-log slopes of d_min against Q and their median."""

    q_values: tuple[int, ...]
    slopes: tuple[float, ...]
    median_slope: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "q_values": list(self.q_values),
            "slopes": list(self.slopes),
            "median_slope": float(self.median_slope),
        }


__all__ = [
    "CSV_COLUMNS",
    "StreamMetrics",
    "ExperimentRecord",
    "SweepResult",
    "KgScanResult",
    "KgProbeRow",
    "KgSummary",
    "ScalingProbeResult",
]
