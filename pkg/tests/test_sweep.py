"""
RealAlign: Tests for the Monte Carlo DOF sweep.

These tests verify that:
- power grids are geometric and validated
- a point-to-point sweep recovers one degree of freedom
- the two-user X sweep drives the error rate down while the sum rate grows
- results do not depend on the worker count
- failed points become rows with a reason code and the sweep continues
- transmit power, error bounds and error-rate monotonicity hold on sampled runs
"""

import math
import os
import sys

import numpy as np

# Make project packages importable without packaging/install
sys.path.insert(0, os.path.abspath("src"))

from ria.channel import ChannelRealization  # noqa: E402
from ria.errors import InvalidSpec  # noqa: E402
from ria.schemas import Scheme  # noqa: E402
from ria.signaling import build_stream_plan, derive_params, realize_plan, required_m  # noqa: E402
from ria_bench.bounds import pe_bound  # noqa: E402
from ria_bench.models import ExperimentRecord  # noqa: E402
from ria_bench.sweep import (  # noqa: E402
    CHUNK_TRIALS,
    dof_sweep,
    fit_slope,
    geometric_grid,
    run_sweep_point,
    validate_grid,
)
from ria_logging.events import EventKind  # noqa: E402
from ria_logging.jsonl import events_of_kind  # noqa: E402
from ria_logging.recorder import EventRecorder  # noqa: E402


FIXED_X_GAINS = [[1.2345, 0.8765], [0.6543, 1.4321]]


def p2p_plan():
    return realize_plan(build_stream_plan(Scheme.P2P))


def test_geometric_grid_hits_both_ends():
    grid = geometric_grid(1.0e4, 1.0e12, 9)

    assert len(grid) == 9
    for k, value in enumerate(grid):
        assert math.isclose(value, 10.0 ** (4 + k), rel_tol=1e-9)
    assert validate_grid(grid) == grid


def test_validate_grid_rejects_short_flat_or_irregular_grids():
    for grid in (
        (1.0e4, 1.0e5, 1.0e6),
        (1.0, 10.0, 100.0, 1000.0),
        (1.0e4, 1.0e5, 1.0e7, 1.0e8),
        (1.0e4, 1.0e4, 1.0e4, 1.0e4),
    ):
        try:
            validate_grid(grid)
            raised = False
        except InvalidSpec:
            raised = True
        assert raised is True


def test_dof_sweep_requires_enough_trials():
    try:
        dof_sweep(p2p_plan(), geometric_grid(1.0e4, 1.0e8, 5), trials=999, seed=0)
        raised = False
    except InvalidSpec:
        raised = True

    assert raised is True


def test_p2p_sweep_recovers_one_degree_of_freedom():
    result = dof_sweep(
        p2p_plan(),
        geometric_grid(1.0e4, 1.0e12, 9),
        trials=1000,
        seed=3,
        gamma=0.1,
        epsilon=0.0,
    )

    assert result.m == 1
    assert result.failures == 0
    assert result.slope is not None
    assert abs(result.slope - 1.0) < 0.05
    assert all(record.ceiling_ok for record in result.records)
    assert result.records[-1].ser == 0.0
    assert result.records[0].Q == 10
    assert result.details["epsilon"] == 0.0


def test_two_user_x_sweep_improves_with_power():
    h = ChannelRealization.from_matrix(Scheme.TWO_USER_X, 2, 2, FIXED_X_GAINS)
    realized = realize_plan(build_stream_plan(Scheme.TWO_USER_X), h=h)

    result = dof_sweep(
        realized,
        geometric_grid(1.0e4, 1.0e12, 9),
        trials=1000,
        seed=11,
        gamma=0.1,
        epsilon=0.1,
    )
    records = result.records
    top, bottom = records[-1], records[0]

    assert result.m == 3
    assert result.failures == 0
    assert top.ser <= 1.0e-3
    assert top.ser <= bottom.ser
    assert top.sum_mux > 0.3
    assert top.sum_mux > bottom.sum_mux
    upper = records[len(records) // 2:]
    for left, right in zip(upper, upper[1:]):
        assert right.rate_bits >= left.rate_bits - 0.05
    assert result.slope is not None and result.slope > 0.0
    assert len(top.streams) == 4
    assert math.isclose(top.sum_mux, sum(stream.mux for stream in top.streams))


def test_sweep_point_does_not_depend_on_workers():
    realized = p2p_plan()
    trials = 2 * CHUNK_TRIALS + 500

    serial = run_sweep_point(realized, 1.0e4, gamma=1.0, epsilon=0.0, m=1, trials=trials, seed=5, workers=1)
    threaded = run_sweep_point(realized, 1.0e4, gamma=1.0, epsilon=0.0, m=1, trials=trials, seed=5, workers=3)

    assert serial.ser > 0.0
    assert serial.csv_row() == threaded.csv_row()
    assert serial.streams[0].errors == threaded.streams[0].errors


def test_sweep_point_is_reproducible_from_the_seed():
    realized = p2p_plan()

    first = run_sweep_point(realized, 1.0e4, gamma=1.0, epsilon=0.0, m=1, trials=1000, seed=8)
    again = run_sweep_point(realized, 1.0e4, gamma=1.0, epsilon=0.0, m=1, trials=1000, seed=8)

    assert first.csv_row() == again.csv_row()


def test_failed_points_are_recorded_and_the_sweep_continues():
    recorder = EventRecorder(scheme="p2p")

    result = dof_sweep(
        p2p_plan(),
        geometric_grid(1.0e4, 1.0e12, 9),
        trials=1000,
        seed=0,
        gamma=0.1,
        epsilon=0.0,
        cap=50,
        recorder=recorder,
    )

    assert len(result.records) == 9
    assert result.records[0].ok is True
    assert all(record.err == "cap_exceeded" for record in result.records[1:])
    assert result.failures == 8
    assert result.slope is None
    assert result.records[1].Q == 31
    assert len(events_of_kind(recorder.buffer(), EventKind.SWEEP_POINT)) == 1
    assert len(events_of_kind(recorder.buffer(), EventKind.SWEEP_POINT_FAILED)) == 8


def test_fit_slope_uses_the_top_half_and_skips_failures():
    records = [
        ExperimentRecord(P=2.0 ** (2 * k), Q=1, A=1.0, d_min=1.0, ser=0.0, rate_bits=2.0 * k, mux=0.0, sum_mux=0.0)
        for k in range(1, 7)
    ]
    records[0] = ExperimentRecord.failed(records[0].P, "degenerate")

    assert math.isclose(fit_slope(records), 2.0)
    assert fit_slope(records[:2]) is None


def test_empirical_transmit_power_stays_under_the_constraint():
    h = ChannelRealization.from_matrix(Scheme.TWO_USER_X, 2, 2, FIXED_X_GAINS)
    realized = realize_plan(build_stream_plan(Scheme.TWO_USER_X), h=h)
    plan = realized.plan
    rng = np.random.default_rng(31)

    for P in (1.0e4, 1.0e8):
        spec = derive_params(P, 1.0, 0.1, required_m(realized.layouts), plan.transmit_values(h))
        symbols = rng.integers(-spec.Q, spec.Q + 1, size=(100_000, len(plan.streams))).astype(float)
        for tx, values in enumerate(plan.transmit_values(h)):
            ids = [stream.stream_id for stream in plan.streams_of(tx)]
            x = spec.A * (symbols[:, ids] @ np.array(values))
            assert float(np.mean(x**2)) <= 1.05 * P


def test_measured_error_rate_respects_the_distance_bound():
    h = ChannelRealization.from_matrix(Scheme.TWO_USER_X, 2, 2, FIXED_X_GAINS)
    trials = 5000

    for realized in (p2p_plan(), realize_plan(build_stream_plan(Scheme.TWO_USER_X), h=h)):
        result = dof_sweep(
            realized,
            geometric_grid(1.0e4, 1.0e8, 5),
            trials=trials,
            seed=13,
            gamma=1.0,
            epsilon=0.1,
        )
        for record in result.records:
            assert record.ok is True
            bound = pe_bound(record.d_min)
            slack = 3.0 * math.sqrt(bound * (1.0 - bound) / trials)
            for stream in record.streams:
                assert stream.ser <= bound + slack


def test_error_rate_does_not_rise_with_power():
    result = dof_sweep(
        p2p_plan(),
        geometric_grid(1.0e4, 1.0e8, 5),
        trials=5000,
        seed=7,
        gamma=1.0,
        epsilon=0.1,
    )
    sers = [record.ser for record in result.records]

    assert sers[0] > 0.1
    for left, right in zip(sers, sers[1:]):
        assert right <= left
