"""
Empirical Khintchine-Groshev probe for RealAlign.

For a real vector v and monomial functions g_1..g_m the scan measures

    min over nonzero integer q, |q_i| <= N, of |p + q . g(v)| * max|q_i|^(m + eps)

with p = -round(q . g(v)) the single best integer. For almost every v the
minimum stays bounded away from zero; a rational dependence inside the box
shows up as ``zero_hit``.

The same module hosts the minimum-distance scaling probe: for the 3-user
multiple-access layout with directions {1, a, b} and A = 1, d_min should
shrink like Q^-2.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from ria.channel import DEFAULT_GAIN_DISTRIBUTION, GainDistribution
from ria.errors import AlignmentSimError, CapExceeded, InvalidSpec, reason_code_of
from ria.signaling import DEFAULT_CONSTELLATION_CAP, min_distance_direct
from ria_logging.recorder import EventRecorder
from .models import KgProbeRow, KgScanResult, KgSummary, ScalingProbeResult


ZERO_HIT_TOL = 1e-12
DEFAULT_SCALING_Q = (5, 10, 20, 40)


def _evaluate_monomials(v: np.ndarray, exponents: Optional[Sequence[Sequence[int]]]) -> np.ndarray:
    if exponents is None:
        return v.copy()
    rows = np.asarray(exponents, dtype=np.int64)
    if rows.ndim != 2 or rows.shape[1] != v.size:
        raise InvalidSpec(f"each monomial needs {v.size} exponents")
    if np.any(rows < 0):
        raise InvalidSpec("monomial exponents must be nonnegative")
    return np.prod(v[None, :] ** rows, axis=1)


def kg_scan(
    v: Sequence[float],
    exponents: Optional[Sequence[Sequence[int]]] = None,
    *,
    epsilon: float = 0.0,
    q_range: int = 50,
    cap: int = DEFAULT_CONSTELLATION_CAP,
) -> KgScanResult:
    """
    Exhaustive scan over the half box of q whose first nonzero entry is
    positive (q and -q give the same value).

    ``exponents`` lists one exponent row per monomial g_i; None means g_i = v_i.
    Ties are broken toward the smaller height max|q_i|.
    """
    base = np.asarray(v, dtype=float)
    if base.ndim != 1 or base.size == 0 or not np.all(np.isfinite(base)):
        raise InvalidSpec("v must be a nonempty finite vector")
    if q_range < 1:
        raise InvalidSpec(f"q_range must be >= 1, got {q_range}")
    if epsilon < 0:
        raise InvalidSpec(f"epsilon must be >= 0, got {epsilon}")
    g = _evaluate_monomials(base, exponents)
    m = g.size
    side = 2 * q_range + 1
    size = side**m
    if size > cap:
        raise CapExceeded(f"KG box of {size} vectors exceeds cap {cap}")

    q = np.stack(np.unravel_index(np.arange(size), (side,) * m)).astype(np.int64) - q_range
    nonzero = q != 0
    has_nonzero = nonzero.any(axis=0)
    first = np.argmax(nonzero, axis=0)
    leading = q[first, np.arange(size)]
    keep = has_nonzero & (leading > 0)
    q = q[:, keep]

    s = g @ q.astype(float)
    p = -np.round(s)
    height = np.max(np.abs(q), axis=0)
    normalized = np.abs(p + s) * height.astype(float) ** (m + epsilon)

    best = int(np.lexsort((height, normalized))[0])
    min_normalized = float(normalized[best])
    return KgScanResult(
        v=tuple(float(value) for value in base),
        m=m,
        epsilon=float(epsilon),
        q_range=int(q_range),
        min_normalized=min_normalized,
        p=int(p[best]),
        q=tuple(int(value) for value in q[:, best]),
        zero_hit=min_normalized < ZERO_HIT_TOL,
    )


def _sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def kg_probe(
    samples: int,
    *,
    m: int = 2,
    epsilon: float = 0.1,
    q_range: int = 50,
    seed: int = 0,
    distribution: GainDistribution = DEFAULT_GAIN_DISTRIBUTION,
    injected: Optional[Sequence[float]] = None,
    cap: int = DEFAULT_CONSTELLATION_CAP,
    recorder: Optional[EventRecorder] = None,
) -> list[KgProbeRow]:
    """
    Scan ``samples`` vectors drawn from ``distribution``; sample i uses
    ``SeedSequence([seed, i])``. An ``injected`` vector is scanned last.
    """
    if samples < 0 or m < 1:
        raise InvalidSpec(f"need samples >= 0 and m >= 1, got {samples}, {m}")
    vectors: list[tuple[tuple[float, ...], bool]] = [
        (tuple(float(value) for value in distribution.sample(_sample_rng(seed, index), (m,))), False)
        for index in range(samples)
    ]
    if injected is not None:
        vectors.append((tuple(float(value) for value in injected), True))

    rows: list[KgProbeRow] = []
    for index, (v, is_injected) in enumerate(vectors):
        try:
            result = kg_scan(v, epsilon=epsilon, q_range=q_range, cap=cap)
        except AlignmentSimError as exc:
            row = KgProbeRow(index=index, v=v, err=reason_code_of(exc), injected=is_injected)
        else:
            row = KgProbeRow(index=index, v=v, result=result, injected=is_injected)
        rows.append(row)
        if recorder is not None:
            details = {"v": list(v), "injected": is_injected}
            if row.result is not None:
                details.update(min_normalized=row.result.min_normalized, zero_hit=row.result.zero_hit)
            recorder.record_kg_sample(index, details, reason_code=row.err or "ok")
    return rows


def summarize_kg(rows: Sequence[KgProbeRow], *, include_injected: bool = False) -> KgSummary:
    """Quantiles of min_normalized over successful sampled rows."""
    considered = [row for row in rows if include_injected or not row.injected]
    values = np.array([row.result.min_normalized for row in considered if row.result is not None], dtype=float)
    failures = sum(1 for row in considered if row.result is None)
    zero_hits = sum(1 for row in considered if row.result is not None and row.result.zero_hit)
    if values.size == 0:
        return KgSummary(len(considered), failures, zero_hits, math.nan, math.nan, math.nan, math.nan)
    q10, q50, q90 = (float(value) for value in np.quantile(values, [0.1, 0.5, 0.9]))
    return KgSummary(
        samples=len(considered),
        failures=failures,
        zero_hits=zero_hits,
        min_normalized=float(values.min()),
        q10=q10,
        q50=q50,
        q90=q90,
    )


def dmin_scaling_probe(
    samples: int,
    *,
    q_values: Sequence[int] = DEFAULT_SCALING_Q,
    seed: int = 0,
    distribution: GainDistribution = DEFAULT_GAIN_DISTRIBUTION,
    cap: int = DEFAULT_CONSTELLATION_CAP,
) -> ScalingProbeResult:
    """
    Median least-squares slope of log d_min against log Q for the layout
    {1, a, b} with unit fold counts and A = 1; (a, b) are sampled per
    ``SeedSequence([seed, i])``.
    """
    if samples < 1 or len(q_values) < 2:
        raise InvalidSpec("need at least one sample and two Q values")
    log_q = np.log(np.asarray(q_values, dtype=float))
    slopes: list[float] = []
    for index in range(samples):
        a, b = distribution.sample(_sample_rng(seed, index), (2,))
        values = [1.0, float(a), float(b)]
        d_min = [min_distance_direct(values, [1, 1, 1], int(Q), 1.0, cap=cap) for Q in q_values]
        slopes.append(float(np.polyfit(log_q, np.log(d_min), 1)[0]))
    return ScalingProbeResult(
        q_values=tuple(int(Q) for Q in q_values),
        slopes=tuple(slopes),
        median_slope=float(np.median(slopes)),
    )


__all__ = [
    "ZERO_HIT_TOL",
    "DEFAULT_SCALING_Q",
    "kg_scan",
    "kg_probe",
    "summarize_kg",
    "dmin_scaling_probe",
]
