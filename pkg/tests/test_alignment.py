"""
RealAlign: Tests for symbolic direction generation and alignment checks.

These tests verify that:
- generated direction sets match their closed-form cardinalities
- shifted transmit sets land inside the shared interference set
- intended and interference directions never overlap
- the three-user standard-form sets have the expected shapes
"""

import os
import sys
from fractions import Fraction

# Make project packages importable without packaging/install
sys.path.insert(0, os.path.abspath("src"))

from ria.alignment import (  # noqa: E402
    G0_GAIN,
    alignment_efficiency,
    box_size,
    check_scheme_alignment,
    enumerate_box,
    gic_intended_directions,
    gic_interference_count,
    gic_interference_directions,
    gic_transmit_count,
    gic_transmit_directions,
    has_direct_gain,
    shift,
    threeuser_caseI_directions,
    threeuser_caseII_directions,
    threeuser_caseII_dof,
    uplink_has_direct_gain,
    uplink_interference_count,
    uplink_interference_directions,
    uplink_transmit_count,
    uplink_transmit_directions,
    verify_alignment,
    verify_separability,
    x_block_count,
    x_interference_blocks,
    x_interference_directions,
    x_transmit_count,
    x_transmit_directions,
)
from ria.errors import CapExceeded, InvalidDims  # noqa: E402
from ria.schemas import ExponentVector, GainId, Role, Scheme  # noqa: E402


def test_enumerate_box_matches_box_size():
    bounds = {GainId(0, 1): (0, 2), GainId(1, 0): (1, 3)}

    directions = enumerate_box(bounds)

    assert len(directions) == box_size(bounds) == 9
    assert ExponentVector.from_mapping({GainId(1, 0): 1}) in directions
    assert ExponentVector.unit() not in directions


def test_enumerate_box_with_no_bounds_is_the_unit_monomial():
    directions = enumerate_box({})

    assert directions.directions == (ExponentVector.unit(),)


def test_enumeration_cap_is_enforced():
    try:
        gic_interference_directions(3, 2, cap=100)
        raised = False
    except CapExceeded as exc:
        raised = True
        assert exc.reason_code == "cap_exceeded"

    assert raised is True


def test_gic_closed_form_counts():
    assert gic_transmit_count(2, 1) == 2
    assert gic_interference_count(2, 1) == 4
    assert gic_transmit_count(3, 2) == 324
    assert gic_interference_count(3, 2) == 729
    assert gic_transmit_count(4, 1) == 512
    assert gic_interference_count(4, 1) == 4096


def test_gic_generated_sets_match_closed_forms():
    for K, n in ((2, 1), (2, 2), (3, 1), (3, 2), (4, 1)):
        for i in range(K):
            assert len(gic_transmit_directions(K, n, i)) == gic_transmit_count(K, n)
        assert len(gic_interference_directions(K, n)) == gic_interference_count(K, n)


def test_gic_transmit_sets_never_carry_direct_gains():
    for i in range(3):
        transmit = gic_transmit_directions(3, 2, i)
        assert has_direct_gain(transmit) is False
        assert has_direct_gain(gic_intended_directions(3, 2, i)) is True


def test_gic_transmit_exponent_bounds():
    transmit = gic_transmit_directions(3, 2, 1)

    assert max(vector.exponent(GainId(0, 1)) for vector in transmit) == 1
    assert max(vector.exponent(GainId(0, 2)) for vector in transmit) == 2
    assert transmit.role == Role.TRANSMIT
    assert transmit.owners == (1,)


def test_gic_interference_is_aligned_at_every_receiver():
    K, n = 3, 2
    target = gic_interference_directions(K, n)

    for i in range(K):
        for k in range(K):
            if k == i:
                continue
            report = verify_alignment(shift(gic_transmit_directions(K, n, k), GainId(i, k)), target)
            assert report.contained is True
            assert report.violating_directions == ()
            assert report.efficiency == Fraction(324, 729)


def test_direct_gain_shift_breaks_containment_and_keeps_separability():
    K, n = 2, 1
    target = gic_interference_directions(K, n)
    intended = shift(gic_transmit_directions(K, n, 0), GainId(0, 0))

    report = verify_alignment(intended, target)
    separability = verify_separability(intended, target)

    assert report.contained is False
    assert len(report.violating_directions) == len(intended)
    assert separability.separable is True
    assert separability.collisions == ()


def test_separability_reports_collisions():
    target = gic_interference_directions(2, 1)

    report = verify_separability(target, target)

    assert report.separable is False
    assert len(report.collisions) == len(target)


def test_uplink_counts_and_direct_gains():
    K, M, n = 2, 2, 1

    assert uplink_transmit_count(K, M, n) == 8
    assert uplink_interference_count(K, M, n) == 16
    for k in range(K):
        for m in range(M):
            transmit = uplink_transmit_directions(K, M, n, k, m)
            assert len(transmit) == 8
            assert uplink_has_direct_gain(transmit) is False


def test_uplink_interference_absorbs_every_cross_cell_user():
    K, M, n = 2, 2, 1
    target = uplink_interference_directions(K, M, n)

    assert len(target) == 16
    for k in range(K):
        for m in range(M):
            own = k * M + m
            transmit = uplink_transmit_directions(K, M, n, k, m)
            for j in range(K):
                if j == k:
                    continue
                assert verify_alignment(shift(transmit, GainId(j, own)), target).contained is True


def test_x_counts_and_blocks():
    K, M, n = 2, 2, 1

    assert x_transmit_count(K, M, n) == 2
    assert x_block_count(K, M, n) == 4
    assert len(x_transmit_directions(K, M, n, 0, 1)) == 2

    blocks = x_interference_blocks(K, M, n, 0)
    assert list(blocks) == [1]
    assert len(blocks[1]) == 4
    assert len(x_interference_directions(K, M, n, 0)) == 4


def test_x_three_by_three_blocks_share_receiver():
    blocks = x_interference_blocks(3, 3, 1, 2)

    assert sorted(blocks) == [0, 1]
    assert all(len(block) == x_block_count(3, 3, 1) for block in blocks.values())


def test_scheme_summaries_pass_for_every_generated_scheme():
    for scheme, K, M, n in (
        (Scheme.GIC, 3, 1, 1),
        (Scheme.GIC, 3, 1, 2),
        (Scheme.UPLINK, 2, 2, 1),
        (Scheme.X, 2, 2, 1),
        (Scheme.X, 3, 2, 1),
    ):
        summary = check_scheme_alignment(scheme, K, M, n)
        assert summary.counts_match is True
        assert summary.all_contained is True
        assert summary.all_separable is True
        assert summary.passed is True


def test_gic_summary_labels_and_serialization():
    summary = check_scheme_alignment("gic", 2, 1, 1)

    assert summary.counts == {"interference": 4, "tx=0": 2, "tx=1": 2}
    assert set(summary.alignment) == {"rx=0<-tx=1", "rx=1<-tx=0"}
    assert set(summary.separability) == {"rx=0", "rx=1"}
    assert summary.to_dict()["passed"] is True


def test_scheme_summary_rejects_layout_only_schemes():
    try:
        check_scheme_alignment(Scheme.TWO_USER_X, 2, 2, 1)
        raised = False
    except InvalidDims:
        raised = True

    assert raised is True


def test_invalid_dimensions_are_rejected():
    for call in (
        lambda: gic_transmit_directions(1, 1, 0),
        lambda: gic_transmit_directions(3, 0, 0),
        lambda: gic_transmit_directions(3, 1, 3),
        lambda: uplink_transmit_directions(1, 2, 1, 0, 0),
        lambda: x_transmit_directions(2, 1, 1, 0, 0),
    ):
        try:
            call()
            raised = False
        except InvalidDims:
            raised = True
        assert raised is True


def test_threeuser_caseII_sets():
    t0, t1, t2 = threeuser_caseII_directions(2)

    assert len(t0) == 3
    assert len(t1) == len(t2) == 2
    assert [vector.power_of(G0_GAIN) for vector in t0] == [0, 1, 2]
    assert threeuser_caseII_dof(1) == Fraction(4, 3)
    assert threeuser_caseII_dof(2) == Fraction(7, 5)


def test_threeuser_caseI_sets_use_the_polynomial_basis():
    sets = threeuser_caseI_directions(3)

    for directions in sets:
        assert [vector.power_of(G0_GAIN) for vector in directions] == [0, 1, 2]


def test_alignment_efficiency_is_exact():
    assert alignment_efficiency(2, 4) == Fraction(1, 2)
    try:
        alignment_efficiency(0, 4)
        raised = False
    except InvalidDims:
        raised = True
    assert raised is True


def test_gic_alignment_efficiency_does_not_fall_as_n_grows():
    for K, largest_generated in ((2, 4), (3, 2)):
        generated = [
            alignment_efficiency(len(gic_transmit_directions(K, n, 0)), len(gic_interference_directions(K, n)))
            for n in range(1, largest_generated + 1)
        ]
        closed = [alignment_efficiency(gic_transmit_count(K, n), gic_interference_count(K, n)) for n in range(1, 9)]

        assert generated == closed[:largest_generated]
        for left, right in zip(closed, closed[1:]):
            assert right >= left
        assert closed[0] == Fraction(1, 2 ** (K - 1))
