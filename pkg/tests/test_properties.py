"""
RealAlign: Property-based tests for monomial algebra, decoding and bounds.
"""

import os
import sys

import numpy as np
from hypothesis import given, settings, strategies as st

# Make project packages importable without packaging/install
sys.path.insert(0, os.path.abspath("src"))

from ria.alignment import shift  # noqa: E402
from ria.channel import (  # noqa: E402
    ChannelRealization,
    GainDistribution,
    MinimalPolynomial,
    evaluate_direction,
    fold_top_power,
)
from ria.schemas import DirectionSet, ExponentVector, GainId, Role, Scheme  # noqa: E402
from ria.signaling import nearest_point_indices  # noqa: E402
from ria_bench.bounds import rate_lower_bound, wilson_interval  # noqa: E402


gain_ids = st.builds(GainId, st.integers(0, 3), st.integers(0, 3))
monomials = st.dictionaries(gain_ids, st.integers(0, 4), max_size=5).map(ExponentVector.from_mapping)
finite = st.floats(min_value=-1.0e6, max_value=1.0e6, allow_nan=False, allow_infinity=False)


@given(monomials)
def test_monomial_text_round_trip(t):
    assert ExponentVector.from_text(t.to_text()) == t


@given(monomials, monomials)
def test_monomial_product_adds_exponents(a, b):
    product = a * b

    assert product == b * a
    assert product.degree == a.degree + b.degree
    for gain in set(a.gains()) | set(b.gains()):
        assert product.exponent(gain) == a.exponent(gain) + b.exponent(gain)


@given(monomials, gain_ids, st.integers(1, 3))
def test_shift_is_multiplication_by_a_single_gain(t, gain, by):
    assert t.shift(gain, by) == t * ExponentVector.of(gain, by)
    assert ExponentVector.of(gain, by).power_of(gain) == by


@given(
    monomials,
    monomials,
    st.lists(st.floats(0.5, 2.0), min_size=16, max_size=16),
)
def test_evaluation_is_multiplicative(a, b, gains):
    h = ChannelRealization.from_matrix(Scheme.GIC, 4, 1, np.array(gains).reshape(4, 4))

    expected = evaluate_direction(h, a) * evaluate_direction(h, b)

    assert np.isclose(evaluate_direction(h, a * b), expected, rtol=1e-12, atol=0.0)


@given(st.lists(monomials, max_size=12), gain_ids, st.integers(1, 3))
def test_shift_is_injective_on_direction_sets(vectors, gain, by):
    directions = DirectionSet.build(vectors, scheme=Scheme.GIC, K=4, M=1, n=1, role=Role.TRANSMIT)

    shifted = shift(directions, gain, by)

    assert len(shifted) == len(directions)
    assert all(vector.shift(gain, by) in shifted for vector in directions)


@given(
    st.sampled_from([(-2, 0, 1), (-3, 0, 1), (-1, -1, 1), (-2, 0, 0, 1), (-1, -3, 2)]).flatmap(
        lambda coeffs: st.tuples(
            st.just(coeffs),
            st.lists(st.integers(-50, 50), min_size=len(coeffs), max_size=len(coeffs)),
        )
    )
)
def test_folding_preserves_the_scaled_value(case):
    coeffs, combo = case
    polynomial = MinimalPolynomial(coeffs)
    g0 = max(polynomial.real_roots())

    folded = fold_top_power(combo, polynomial)
    direct = folded.scale * sum(u * g0**j for j, u in enumerate(combo))
    magnitude = 1.0 + sum(abs(u) * abs(g0) ** j for j, u in enumerate(combo)) * abs(folded.scale)

    assert len(folded.coeffs) == polynomial.degree
    assert abs(folded.evaluate(g0) - direct) <= 1e-9 * magnitude


@given(st.lists(finite, min_size=1, max_size=40, unique=True), st.lists(finite, min_size=1, max_size=20))
def test_nearest_point_matches_brute_force(points, observations):
    sorted_points = np.array(sorted(points))
    ys = np.array(observations)

    fast = nearest_point_indices(sorted_points, ys)
    nearest = np.min(np.abs(ys[:, None] - sorted_points[None, :]), axis=1)

    assert np.array_equal(np.abs(ys - sorted_points[fast]), nearest)


@given(st.integers(1, 10_000), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_rate_bound_falls_as_error_rate_rises(Q, ser_a, ser_b):
    low, high = sorted((ser_a, ser_b))

    assert rate_lower_bound(high, Q) <= rate_lower_bound(low, Q)
    assert rate_lower_bound(low, Q) <= max(0.0, np.log2(2 * Q - 1) - 1.0) + 1e-12


@given(st.integers(1, 5000).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))))
def test_wilson_interval_contains_the_estimate(pair):
    errors, trials = pair

    low, high = wilson_interval(errors, trials)

    assert 0.0 <= low <= high <= 1.0
    assert low - 1e-12 <= errors / trials <= high + 1e-12


@settings(max_examples=25)
@given(
    st.sampled_from(["uniform", "signed-uniform", "log-uniform"]),
    st.floats(0.1, 5.0),
    st.floats(0.1, 5.0),
    st.integers(0, 2**31 - 1),
)
def test_gain_samples_stay_in_their_support(kind, a, b, seed):
    lo, hi = min(a, b), max(a, b) + 0.01
    distribution = GainDistribution.parse(f"{kind}:{lo!r},{hi!r}")

    samples = distribution.sample(np.random.default_rng(seed), (64,))
    magnitudes = np.abs(samples)

    assert np.all(magnitudes >= lo * (1.0 - 1e-12))
    assert np.all(magnitudes <= hi * (1.0 + 1e-12))
    assert np.all(samples != 0.0)
