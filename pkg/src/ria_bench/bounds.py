"""
Closed forms and bounds for RealAlign experiments.

- rate lower bound from the symbol error rate (Fano style)
- error probability bounds from the minimum distance
- Wilson score intervals for Monte Carlo error rates
- exact DOF tables: asymptotic, finite-n and count/layout based

Every DOF value is an exact ``Fraction``; floating point enters only through
error rates and rates in bits (base-2 logarithms).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from scipy.special import erfc
from scipy.stats import norm

from ria.alignment import (
    gic_interference_count,
    gic_transmit_count,
    threeuser_caseII_dof,
    uplink_interference_count,
    uplink_transmit_count,
    x_block_count,
    x_transmit_count,
)
from ria.errors import InvalidDims, InvalidSpec
from ria.schemas import Scheme
from ria.signaling import ReceiverLayout, required_m


# ------------------------- #
#     RATES AND ERRORS      #
# ------------------------- #

def rate_lower_bound(ser: float, Q: int) -> float:
    """max(0, (1 - SER) log2(2Q - 1) - 1) bits per channel use."""
    if not 0.0 <= ser <= 1.0:
        raise InvalidSpec(f"SER must lie in [0, 1], got {ser}")
    if Q < 1:
        raise InvalidSpec(f"Q must be >= 1, got {Q}")
    return max(0.0, (1.0 - ser) * math.log2(2 * Q - 1) - 1.0)


def multiplexing_gain(rate_bits: float, P: float) -> float:
    """rate / (0.5 log2 P)."""
    if not P > 1.0:
        raise InvalidSpec(f"multiplexing gain needs P > 1, got {P}")
    return rate_bits / (0.5 * math.log2(P))


def pe_bound(d_min: float) -> float:
    """exp(-d_min^2 / 8) for unit noise variance."""
    if d_min < 0:
        raise InvalidSpec(f"d_min must be >= 0, got {d_min}")
    return math.exp(-d_min * d_min / 8.0)


def pe_q_bound(d_min: float) -> float:
    """Gaussian tail Q(d_min / 2); never larger than ``pe_bound``."""
    if d_min < 0:
        raise InvalidSpec(f"d_min must be >= 0, got {d_min}")
    return float(0.5 * erfc(d_min / (2.0 * math.sqrt(2.0))))


def wilson_interval(errors: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials < 1 or not 0 <= errors <= trials:
        raise InvalidSpec(f"need 0 <= errors <= trials and trials >= 1, got {errors}/{trials}")
    if not 0.0 < confidence < 1.0:
        raise InvalidSpec(f"confidence must lie in (0, 1), got {confidence}")
    z = float(norm.ppf(0.5 + confidence / 2.0))
    p_hat = errors / trials
    denom = 1.0 + z * z / trials
    center = (p_hat + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


# ------------------------- #
#         DOF TABLES        #
# ------------------------- #

def theoretical_dof(scheme: Scheme | str, K: int = 2, M: int = 1) -> Fraction:
    """Asymptotic total DOF of each scheme."""
    scheme = Scheme(scheme)
    if scheme == Scheme.GIC:
        if K < 2:
            raise InvalidDims(f"gic needs K >= 2, got K={K}")
        return Fraction(K, 2)
    if scheme == Scheme.UPLINK:
        if K < 2 or M < 1:
            raise InvalidDims(f"uplink needs K >= 2 and M >= 1, got K={K}, M={M}")
        return Fraction(K * M, M + 1)
    if scheme == Scheme.X:
        if K < 2 or M < 2:
            raise InvalidDims(f"x channel needs K >= 2 and M >= 2, got K={K}, M={M}")
        return Fraction(K * M, K + M - 1)
    if scheme == Scheme.THREE_USER:
        return Fraction(3, 2)
    if scheme == Scheme.TWO_USER_X:
        return Fraction(4, 3)
    if scheme == Scheme.MAC and K < 1:
        raise InvalidDims(f"mac needs K >= 1, got K={K}")
    return Fraction(1)


def count_based_dof(streams: int, transmit_count: int, received_count: int) -> Fraction:
    """streams * L / (L + L' + 1) for a symmetric construction."""
    if transmit_count < 1 or received_count < 1:
        raise InvalidDims("direction counts must be >= 1")
    return Fraction(streams * transmit_count, transmit_count + received_count + 1)


def finite_n_dof(scheme: Scheme | str, K: int, M: int, n: int) -> Fraction:
    """
    DOF achieved by the size-n construction.

    gic:        K L / (L + L' + 1)
    uplink:     MK L / (M L + L' + 1)
    x:          MK L / (K L + (M - 1) L' + 1), L' one interference block
    three-user: (3n + 1) / (2n + 1)
    """
    scheme = Scheme(scheme)
    if scheme == Scheme.GIC:
        return count_based_dof(K, gic_transmit_count(K, n), gic_interference_count(K, n))
    if scheme == Scheme.UPLINK:
        L = uplink_transmit_count(K, M, n)
        L_prime = uplink_interference_count(K, M, n)
        return Fraction(M * K * L, M * L + L_prime + 1)
    if scheme == Scheme.X:
        L = x_transmit_count(K, M, n)
        L_prime = x_block_count(K, M, n)
        return Fraction(M * K * L, K * L + (M - 1) * L_prime + 1)
    if scheme == Scheme.THREE_USER:
        return threeuser_caseII_dof(n)
    raise InvalidDims(f"{scheme.value} has no size-n construction")


def layout_dof(layouts: Iterable[ReceiverLayout], *, unit_padding: bool = False) -> Fraction:
    """sum_j L_j / m over the receivers of one realized plan."""
    layout_list = list(layouts)
    if not layout_list:
        raise InvalidDims("layout_dof needs at least one receiver layout")
    return Fraction(sum(layout.L for layout in layout_list), required_m(layout_list, unit_padding=unit_padding))


def mac_cut_ceiling(P: float, gains_squared_row_sum: float, noise_var: float = 1.0) -> float:
    """0.5 log2(1 + P sum_i h_ji^2 / sigma^2): sanity ceiling on the rate into one receiver."""
    return 0.5 * math.log2(1.0 + P * gains_squared_row_sum / noise_var)


__all__ = [
    "rate_lower_bound",
    "multiplexing_gain",
    "pe_bound",
    "pe_q_bound",
    "wilson_interval",
    "theoretical_dof",
    "count_based_dof",
    "finite_n_dof",
    "layout_dof",
    "mac_cut_ceiling",
]
