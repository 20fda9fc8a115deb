"""
Monte Carlo DOF sweep for RealAlign.

For each transmit power P of a geometric grid the runner:

1. derives (Q, A) from (P, gamma, epsilon, m) and the transmit directions
2. builds every receiver's received constellation
3. sends uniform integer symbols through the Gaussian channel in fixed-size
   chunks, hard-decodes every intended stream and counts symbol errors
4. turns error rates into rate lower bounds and multiplexing estimates

Randomness is partitioned by chunk: chunk c draws from
``SeedSequence([seed, c])``, noise first and symbol uniforms second, and the
same draws are reused at every P (common random numbers). Per-chunk counts
are merged by summation, so results do not depend on the worker count.

A point that fails (cap exceeded, degenerate constellation) becomes a row
with its reason code in ``err``; the sweep continues.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from ria.errors import AlignmentSimError, InvalidSpec, reason_code_of
from ria.signaling import (
    DEFAULT_CONSTELLATION_CAP,
    DEFAULT_EPSILON,
    ConstellationSpec,
    RealizedPlan,
    ReceivedConstellation,
    build_received_constellation,
    decode_labels,
    derive_params,
    required_m,
)
from ria_logging.recorder import EventRecorder
from .bounds import mac_cut_ceiling, multiplexing_gain, rate_lower_bound, wilson_interval
from .models import ExperimentRecord, StreamMetrics, SweepResult


MIN_SWEEP_POINTS = 4
MIN_SWEEP_TRIALS = 1000
CHUNK_TRIALS = 1000
GEOMETRIC_REL_TOL = 1e-6


def geometric_grid(p_start: float, p_stop: float, points: int) -> tuple[float, ...]:
    """``points`` powers from p_start to p_stop, evenly spaced in log P."""
    if not (p_start > 0 and p_stop > p_start and points >= 2):
        raise InvalidSpec(f"need 0 < p_start < p_stop and points >= 2, got {p_start}, {p_stop}, {points}")
    return tuple(float(value) for value in np.geomspace(p_start, p_stop, points))


def validate_grid(p_grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(float(value) for value in p_grid)
    if len(grid) < MIN_SWEEP_POINTS:
        raise InvalidSpec(f"a sweep needs at least {MIN_SWEEP_POINTS} powers, got {len(grid)}")
    if grid[0] <= 1.0 or any(not right > left for left, right in zip(grid, grid[1:])):
        raise InvalidSpec("P grid must be strictly increasing and start above 1")
    ratios = [right / left for left, right in zip(grid, grid[1:])]
    if any(not math.isclose(ratio, ratios[0], rel_tol=GEOMETRIC_REL_TOL) for ratio in ratios):
        raise InvalidSpec("P grid must be geometric")
    return grid


# ------------------------- #
#   MONTE CARLO CHUNKS      #
# ------------------------- #

def _chunk_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, CHUNK_TRIALS)
    return [CHUNK_TRIALS] * full + ([rest] if rest else [])


def _transmit_matrix(realized: RealizedPlan) -> np.ndarray:
    """(streams, transmitters) matrix of evaluated transmit directions."""
    plan = realized.plan
    values = plan.transmit_values(realized.h)
    matrix = np.zeros((len(plan.streams), plan.num_tx), dtype=float)
    offsets = [0] * plan.num_tx
    for stream in plan.streams:
        matrix[stream.stream_id, stream.tx] = values[stream.tx][offsets[stream.tx]]
        offsets[stream.tx] += 1
    return matrix


def _run_chunk(
    chunk: int,
    size: int,
    seed: int,
    realized: RealizedPlan,
    spec: ConstellationSpec,
    constellations: Sequence[ReceivedConstellation],
    transmit: np.ndarray,
    noise_std: float,
) -> np.ndarray:
    """Symbol error counts per stream for one chunk of trials."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(chunk)]))
    plan = realized.plan
    noise = rng.standard_normal((size, plan.num_rx))
    uniforms = rng.random((size, len(plan.streams)))

    radix = 2 * spec.Q + 1
    symbols = np.minimum(np.floor(uniforms * radix), radix - 1).astype(np.int64) - spec.Q
    x = spec.A * (symbols.astype(float) @ transmit)
    y = x @ realized.h.matrix().T + noise_std * noise

    errors = np.zeros(len(plan.streams), dtype=np.int64)
    for rc in constellations:
        if not rc.stream_ids:
            continue
        decoded = rc.labels_to_symbols(decode_labels(rc, y[:, rc.rx]))
        truth = symbols[:, list(rc.stream_ids)]
        errors[list(rc.stream_ids)] += np.sum(decoded != truth, axis=0)
    return errors


def _count_errors(
    realized: RealizedPlan,
    spec: ConstellationSpec,
    constellations: Sequence[ReceivedConstellation],
    *,
    trials: int,
    seed: int,
    noise_std: float,
    workers: int,
) -> np.ndarray:
    transmit = _transmit_matrix(realized)
    jobs = list(enumerate(_chunk_sizes(trials)))

    def run(job: tuple[int, int]) -> np.ndarray:
        chunk, size = job
        return _run_chunk(chunk, size, seed, realized, spec, constellations, transmit, noise_std)

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            counts = list(executor.map(run, jobs))
    else:
        counts = [run(job) for job in jobs]
    return np.sum(counts, axis=0)


# ------------------------- #
#        SWEEP POINTS       #
# ------------------------- #

def _ceiling_ok(realized: RealizedPlan, P: float, streams: Sequence[StreamMetrics], noise_std: float) -> bool:
    if noise_std == 0:
        return True
    row_power = np.sum(realized.h.matrix() ** 2, axis=1)
    noise_var = noise_std**2
    for rx in range(realized.plan.num_rx):
        rate_in = sum(stream.rate_bits for stream in streams if stream.rx == rx)
        if rate_in > mac_cut_ceiling(P, float(row_power[rx]), noise_var) + 1e-9:
            return False
    return True


def run_sweep_point(
    realized: RealizedPlan,
    P: float,
    *,
    gamma: float,
    epsilon: float,
    m: int,
    trials: int,
    seed: int,
    noise_std: float = 1.0,
    workers: int = 1,
    cap: int = DEFAULT_CONSTELLATION_CAP,
) -> ExperimentRecord:
    """Measure one transmit power; library errors become a failed record."""
    spec: Optional[ConstellationSpec] = None
    try:
        spec = derive_params(P, gamma, epsilon, m, realized.plan.transmit_values(realized.h))
        constellations = [
            build_received_constellation(layout, realized.h, spec, cap=cap) for layout in realized.layouts
        ]
        errors = _count_errors(
            realized,
            spec,
            constellations,
            trials=trials,
            seed=seed,
            noise_std=noise_std,
            workers=workers,
        )
    except AlignmentSimError as exc:
        if spec is None:
            return ExperimentRecord.failed(P, reason_code_of(exc))
        return ExperimentRecord.failed(P, reason_code_of(exc), Q=spec.Q, A=spec.A)

    streams: list[StreamMetrics] = []
    for stream in realized.plan.streams:
        count = int(errors[stream.stream_id])
        ser = count / trials
        rate = rate_lower_bound(ser, spec.Q)
        low, high = wilson_interval(count, trials)
        streams.append(
            StreamMetrics(
                stream_id=stream.stream_id,
                rx=stream.rx,
                errors=count,
                trials=trials,
                ser=ser,
                rate_bits=rate,
                mux=multiplexing_gain(rate, P),
                ci_low=low,
                ci_high=high,
            )
        )

    count = len(streams)
    return ExperimentRecord(
        P=float(P),
        Q=spec.Q,
        A=spec.A,
        d_min=min(rc.d_min for rc in constellations),
        ser=math.fsum(s.ser for s in streams) / count,
        rate_bits=math.fsum(s.rate_bits for s in streams),
        mux=math.fsum(s.mux for s in streams) / count,
        sum_mux=math.fsum(s.mux for s in streams),
        streams=tuple(streams),
        ceiling_ok=_ceiling_ok(realized, P, streams, noise_std),
    )


def fit_slope(records: Sequence[ExperimentRecord]) -> Optional[float]:
    """
    Least-squares slope of sum rate against 0.5 log2 P over the top half of
    the grid, failed points excluded. None with fewer than two usable points.
    """
    top = records[len(records) // 2:]
    usable = [record for record in top if record.ok]
    if len(usable) < 2:
        return None
    x = np.array([0.5 * math.log2(record.P) for record in usable])
    y = np.array([record.rate_bits for record in usable])
    return float(np.polyfit(x, y, 1)[0])


def dof_sweep(
    realized: RealizedPlan,
    p_grid: Sequence[float],
    *,
    trials: int,
    seed: int,
    gamma: float = 1.0,
    epsilon: float = DEFAULT_EPSILON,
    noise_std: float = 1.0,
    workers: int = 1,
    unit_padding: bool = False,
    cap: int = DEFAULT_CONSTELLATION_CAP,
    recorder: Optional[EventRecorder] = None,
) -> SweepResult:
    """Run every power of ``p_grid`` on one realized plan and fit the DOF slope."""
    grid = validate_grid(p_grid)
    if trials < MIN_SWEEP_TRIALS:
        raise InvalidSpec(f"a sweep needs at least {MIN_SWEEP_TRIALS} trials per point, got {trials}")
    if noise_std < 0:
        raise InvalidSpec(f"noise_std must be >= 0, got {noise_std}")
    m = required_m(realized.layouts, unit_padding=unit_padding)

    records: list[ExperimentRecord] = []
    for index, P in enumerate(grid):
        record = run_sweep_point(
            realized,
            P,
            gamma=gamma,
            epsilon=epsilon,
            m=m,
            trials=trials,
            seed=seed,
            noise_std=noise_std,
            workers=workers,
            cap=cap,
        )
        records.append(record)
        if recorder is not None:
            recorder.record_sweep_point(index, {**record.csv_row(), "ceiling_ok": record.ceiling_ok})

    return SweepResult(
        scheme=realized.plan.scheme.value,
        records=tuple(records),
        slope=fit_slope(records),
        seed=int(seed),
        trials=int(trials),
        m=m,
        details={
            "gamma": float(gamma),
            "epsilon": float(epsilon),
            "noise_std": float(noise_std),
            "unit_padding": bool(unit_padding),
            "channel_seed": int(realized.h.seed),
            "channel_attempts": int(realized.attempts),
        },
    )


__all__ = [
    "MIN_SWEEP_POINTS",
    "MIN_SWEEP_TRIALS",
    "CHUNK_TRIALS",
    "geometric_grid",
    "validate_grid",
    "run_sweep_point",
    "fit_slope",
    "dof_sweep",
]
