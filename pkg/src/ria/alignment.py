"""
Exact symbolic machinery for transmit and receive directions.

This module provides:

- a generic monomial enumerator backing every generator (``enumerate_box``)
- the direction-set generators for the K-user interference channel, the
  cellular uplink, the K x M X channel and the three-user standard form
- containment (alignment) and disjointness (separability) checks
- closed-form cardinalities and alignment efficiency

Every direction is an ``ExponentVector`` over BASE gains. The X channel's
composite pair variables (h_{jl} h_{rl}) are expanded at construction time,
so directions seen at different receivers compare exactly.

Generators assume the transcendental-gain model. Algebraic gain relations
(three-user Case I) are handled in ``ria.channel`` and ``ria.signaling``.
All functions are pure; outputs are immutable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional, Sequence

from .errors import CapExceeded, InvalidDims
from .schemas import (
    AlignmentReport,
    DirectionSet,
    ExponentVector,
    GainId,
    Role,
    Scheme,
    SeparabilityReport,
)


DEFAULT_ENUMERATION_CAP = 10**7

# In the standard three-user channel the only non-unit cross gain is G0,
# carried from transmitter 1 to receiver 2 (0-based).
G0_GAIN = GainId(2, 1)

# (gains the variable's exponent is added to, lo, hi)
_Variable = tuple[tuple[GainId, ...], int, int]


# ------------------------- #
#        ENUMERATION        #
# ------------------------- #

def _enumerate(variables: Sequence[_Variable], cap: int) -> list[ExponentVector]:
    size = math.prod(hi - lo + 1 for _, lo, hi in variables)
    if size > cap:
        raise CapExceeded(f"enumeration of {size} monomials exceeds cap {cap}")

    gains = sorted({gain for contributions, _, _ in variables for gain in contributions})
    position = {gain: k for k, gain in enumerate(gains)}
    slots = [tuple(position[gain] for gain in contributions) for contributions, _, _ in variables]
    ranges = [range(lo, hi + 1) for _, lo, hi in variables]
    keys = [(gain.rx, gain.tx) for gain in gains]

    vectors: list[ExponentVector] = []
    for combo in itertools.product(*ranges):
        exponents = [0] * len(gains)
        for value, targets in zip(combo, slots):
            if value:
                for target in targets:
                    exponents[target] += value
        terms = tuple((rx, tx, e) for (rx, tx), e in zip(keys, exponents) if e)
        vectors.append(ExponentVector.trusted(terms))
    return vectors


def enumerate_box(
    bounds: Mapping[GainId, tuple[int, int]],
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    scheme: Optional[Scheme] = None,
    K: int = 0,
    M: int = 0,
    n: int = 0,
    role: Role = Role.TRANSMIT,
    owners: Iterable[int] = (),
) -> DirectionSet:
    """
    Enumerate every monomial whose exponent on each bounded gain lies in
    [lo, hi] and is zero elsewhere.

    Empty bounds give the single monomial 1.
    """
    variables: list[_Variable] = []
    for gain, (lo, hi) in sorted(bounds.items()):
        if lo < 0 or hi < lo:
            raise ValueError(f"invalid exponent bounds ({lo},{hi}) for {gain.to_token()}")
        variables.append(((gain,), int(lo), int(hi)))
    return DirectionSet.build(
        _enumerate(variables, cap),
        scheme=scheme,
        K=K,
        M=M,
        n=n,
        role=role,
        owners=owners,
    )


def box_size(bounds: Mapping[GainId, tuple[int, int]]) -> int:
    """Cardinality of ``enumerate_box(bounds)`` without enumerating."""
    return math.prod(hi - lo + 1 for lo, hi in bounds.values())


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidDims(message)


def _check_gic(K: int, n: int) -> None:
    _require(K >= 2, f"gic needs K >= 2, got K={K}")
    _require(n >= 1, f"n must be >= 1, got n={n}")


def _check_uplink(K: int, M: int, n: int) -> None:
    _require(K >= 2, f"uplink needs K >= 2 cells, got K={K}")
    _require(M >= 1, f"uplink needs M >= 1 users per cell, got M={M}")
    _require(n >= 1, f"n must be >= 1, got n={n}")


def _check_x(K: int, M: int, n: int) -> None:
    _require(K >= 2, f"x channel needs K >= 2 transmitters, got K={K}")
    _require(M >= 2, f"x channel needs M >= 2 receivers, got M={M}")
    _require(n >= 1, f"n must be >= 1, got n={n}")


# ------------------------- #
#    CLOSED-FORM COUNTS     #
# ------------------------- #

def gic_transmit_count(K: int, n: int) -> int:
    _check_gic(K, n)
    return n ** (K - 1) * (n + 1) ** ((K - 1) ** 2)


def gic_interference_count(K: int, n: int) -> int:
    _check_gic(K, n)
    return (n + 1) ** (K * (K - 1))


def uplink_transmit_count(K: int, M: int, n: int) -> int:
    _check_uplink(K, M, n)
    return n ** (K - 1) * (n + 1) ** ((K * M - 1) * (K - 1))


def uplink_interference_count(K: int, M: int, n: int) -> int:
    _check_uplink(K, M, n)
    return (n + 1) ** (M * K * (K - 1))


def x_transmit_count(K: int, M: int, n: int) -> int:
    _check_x(K, M, n)
    return n ** (M - 1) * (n + 1) ** ((M - 1) * (K - 1))


def x_block_count(K: int, M: int, n: int) -> int:
    """Members of one per-message interference block."""
    _check_x(K, M, n)
    return (n + 1) ** ((M - 1) * K)


# ------------------------- #
#   K-USER INTERFERENCE     #
# ------------------------- #

def gic_transmit_directions(
    K: int,
    n: int,
    i: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DirectionSet:
    """
    Transmit directions of user i.

    Direct gains never appear; cross gains leaving transmitter i have exponent
    at most n-1, every other cross gain at most n.
    """
    _check_gic(K, n)
    _require(0 <= i < K, f"transmitter index {i} out of range for K={K}")
    variables: list[_Variable] = [
        ((GainId(j, l),), 0, n - 1 if l == i else n)
        for j in range(K)
        for l in range(K)
        if j != l
    ]
    return DirectionSet.build(
        _enumerate(variables, cap),
        scheme=Scheme.GIC,
        K=K,
        M=1,
        n=n,
        role=Role.TRANSMIT,
        owners=(i,),
    )


def gic_interference_directions(K: int, n: int, *, cap: int = DEFAULT_ENUMERATION_CAP) -> DirectionSet:
    _check_gic(K, n)
    variables: list[_Variable] = [
        ((GainId(j, l),), 0, n) for j in range(K) for l in range(K) if j != l
    ]
    return DirectionSet.build(
        _enumerate(variables, cap),
        scheme=Scheme.GIC,
        K=K,
        M=1,
        n=n,
        role=Role.INTERFERENCE,
    )


def gic_intended_directions(K: int, n: int, i: int, *, cap: int = DEFAULT_ENUMERATION_CAP) -> DirectionSet:
    """h_ii times the transmit set of user i."""
    transmit = gic_transmit_directions(K, n, i, cap=cap)
    return shift(transmit, GainId(i, i), role=Role.INTENDED)


# ------------------------- #
#          UPLINK           #
# ------------------------- #

def uplink_transmit_directions(
    K: int,
    M: int,
    n: int,
    k: int,
    m: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DirectionSet:
    """
    Transmit directions of user m in cell k.

    Transmitter columns are flattened as cell*M + user. Gains from a user to
    its own base station never appear; gains from user (k, m) to other base
    stations have exponent at most n-1, all remaining gains at most n.
    """
    _check_uplink(K, M, n)
    _require(0 <= k < K and 0 <= m < M, f"user ({k},{m}) out of range for K={K}, M={M}")
    own = k * M + m
    variables: list[_Variable] = [
        ((GainId(j, t),), 0, n - 1 if t == own else n)
        for j in range(K)
        for t in range(K * M)
        if j != t // M
    ]
    return DirectionSet.build(
        _enumerate(variables, cap),
        scheme=Scheme.UPLINK,
        K=K,
        M=M,
        n=n,
        role=Role.TRANSMIT,
        owners=(own,),
    )


def uplink_interference_directions(
    K: int,
    M: int,
    n: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DirectionSet:
    _check_uplink(K, M, n)
    variables: list[_Variable] = [
        ((GainId(j, t),), 0, n) for j in range(K) for t in range(K * M) if j != t // M
    ]
    return DirectionSet.build(
        _enumerate(variables, cap),
        scheme=Scheme.UPLINK,
        K=K,
        M=M,
        n=n,
        role=Role.INTERFERENCE,
    )


def uplink_intended_directions(
    K: int,
    M: int,
    n: int,
    k: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DirectionSet:
    """Union over the users of cell k of their transmit sets times the direct gain."""
    vectors: set[ExponentVector] = set()
    for m in range(M):
        own = k * M + m
        transmit = uplink_transmit_directions(K, M, n, k, m, cap=cap)
        vectors.update(vector.shift(GainId(k, own)) for vector in transmit)
    return DirectionSet.build(
        vectors,
        scheme=Scheme.UPLINK,
        K=K,
        M=M,
        n=n,
        role=Role.INTENDED,
        owners=(k,),
    )


# ------------------------- #
#         X CHANNEL         #
# ------------------------- #

def x_transmit_directions(
    K: int,
    M: int,
    n: int,
    r: int,
    i: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DirectionSet:
    """
    Directions of the message from transmitter i to receiver r.

    Monomials prod (h_{jl} h_{rl})^{s_jl} over j != r, expanded to base gains;
    s_ji <= n-1, every other s_jl <= n. The stream leaves transmitter i
    premultiplied by h_{ri} (see ``ria.signaling``).
    """
    _check_x(K, M, n)
    _require(0 <= r < M and 0 <= i < K, f"message ({r},{i}) out of range for K={K}, M={M}")
    variables: list[_Variable] = [
        ((GainId(j, l), GainId(r, l)), 0, n - 1 if l == i else n)
        for j in range(M)
        if j != r
        for l in range(K)
    ]
    return DirectionSet.build(
        _enumerate(variables, cap),
        scheme=Scheme.X,
        K=K,
        M=M,
        n=n,
        role=Role.TRANSMIT,
        owners=(r, i),
    )


def x_interference_blocks(
    K: int,
    M: int,
    n: int,
    r: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> dict[int, DirectionSet]:
    """
    Per-message alignment sets seen at receiver r, keyed by the intended
    receiver r' != r of the interfering messages.
    """
    _check_x(K, M, n)
    _require(0 <= r < M, f"receiver index {r} out of range for M={M}")
    blocks: dict[int, DirectionSet] = {}
    for other in range(M):
        if other == r:
            continue
        variables: list[_Variable] = [
            ((GainId(j, l), GainId(other, l)), 0, n)
            for j in range(M)
            if j != other
            for l in range(K)
        ]
        blocks[other] = DirectionSet.build(
            _enumerate(variables, cap),
            scheme=Scheme.X,
            K=K,
            M=M,
            n=n,
            role=Role.INTERFERENCE,
            owners=(other,),
        )
    return blocks


def x_interference_directions(
    K: int,
    M: int,
    n: int,
    r: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DirectionSet:
    """Union of the interference blocks at receiver r; blocks may share members."""
    blocks = list(x_interference_blocks(K, M, n, r, cap=cap).values())
    merged = blocks[0]
    for block in blocks[1:]:
        merged = merged.union(block)
    return DirectionSet.build(
        merged.directions,
        scheme=Scheme.X,
        K=K,
        M=M,
        n=n,
        role=Role.INTERFERENCE,
        owners=(r,),
    )


def x_intended_directions(
    K: int,
    M: int,
    n: int,
    r: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DirectionSet:
    """Messages for receiver r arrive along h_{ri}^2 times their transmit set."""
    vectors: set[ExponentVector] = set()
    for i in range(K):
        transmit = x_transmit_directions(K, M, n, r, i, cap=cap)
        vectors.update(vector.shift(GainId(r, i), 2) for vector in transmit)
    return DirectionSet.build(
        vectors,
        scheme=Scheme.X,
        K=K,
        M=M,
        n=n,
        role=Role.INTENDED,
        owners=(r,),
    )


# ------------------------- #
#   THREE-USER STANDARD     #
# ------------------------- #

def _g0_powers(count: int, *, n: int, owner: int) -> DirectionSet:
    return DirectionSet.build(
        (ExponentVector.of(G0_GAIN, k) for k in range(count)),
        scheme=Scheme.THREE_USER,
        K=3,
        M=1,
        n=n,
        role=Role.TRANSMIT,
        owners=(owner,),
    )


def threeuser_caseII_directions(n: int) -> tuple[DirectionSet, DirectionSet, DirectionSet]:
    """
    Transcendental G0: user 0 sends along {1, G0, ..., G0^n}, users 1 and 2
    along {1, G0, ..., G0^(n-1)}.
    """
    _require(n >= 1, f"n must be >= 1, got n={n}")
    return (
        _g0_powers(n + 1, n=n, owner=0),
        _g0_powers(n, n=n, owner=1),
        _g0_powers(n, n=n, owner=2),
    )


def threeuser_caseI_directions(d: int) -> tuple[DirectionSet, DirectionSet, DirectionSet]:
    """Algebraic G0 of degree d: every user sends along the basis {1, ..., G0^(d-1)}."""
    _require(d >= 1, f"minimal polynomial degree must be >= 1, got d={d}")
    return (
        _g0_powers(d, n=d, owner=0),
        _g0_powers(d, n=d, owner=1),
        _g0_powers(d, n=d, owner=2),
    )


def threeuser_caseII_dof(n: int) -> Fraction:
    _require(n >= 1, f"n must be >= 1, got n={n}")
    return Fraction(3 * n + 1, 2 * n + 1)


# ------------------------- #
#      SYMBOLIC CHECKS      #
# ------------------------- #

def shift(
    directions: DirectionSet,
    gain: GainId,
    by: int = 1,
    *,
    role: Role = Role.RECEIVED,
) -> DirectionSet:
    """Multiply every member by gain**by; cardinality is preserved."""
    return directions.with_directions((vector.shift(gain, by) for vector in directions), role=role)


def alignment_efficiency(transmit_count: int, received_count: int) -> Fraction:
    if transmit_count < 1 or received_count < 1:
        raise InvalidDims(
            f"efficiency needs positive counts, got L_t={transmit_count}, L_r={received_count}"
        )
    return Fraction(transmit_count, received_count)


def verify_alignment(received: DirectionSet, target: DirectionSet) -> AlignmentReport:
    """Exact containment of ``received`` in ``target``."""
    members = target.members()
    violating = tuple(vector for vector in received if vector not in members)
    efficiency = Fraction(0)
    if len(received) >= 1 and len(target) >= 1:
        efficiency = alignment_efficiency(len(received), len(target))
    return AlignmentReport(
        contained=not violating,
        violating_directions=violating,
        transmit_count=len(received),
        received_count=len(target),
        efficiency=efficiency,
    )


def verify_separability(intended: DirectionSet, interference: DirectionSet) -> SeparabilityReport:
    collisions = tuple(sorted(intended.members() & interference.members()))
    return SeparabilityReport(separable=not collisions, collisions=collisions)


def has_direct_gain(directions: DirectionSet) -> bool:
    """True when any member carries h_jj (same receiver and transmitter index)."""
    return any(rx == tx for vector in directions for rx, tx, _ in vector.terms)


def uplink_has_direct_gain(directions: DirectionSet) -> bool:
    """True when any member carries a gain from a user to its own base station."""
    M = directions.M
    return any(rx == tx // M for vector in directions for rx, tx, _ in vector.terms)


# ------------------------- #
#     SCHEME SUMMARIES      #
# ------------------------- #

@dataclass(frozen=True)
class SchemeAlignmentSummary:
    """
    Counts and verdicts for one generated scheme.

    Labels are short strings such as ``tx=1`` or ``rx=0<-tx=2``.
    """

    scheme: Scheme
    K: int
    M: int
    n: int
    counts: dict[str, int] = field(default_factory=dict)
    closed_forms: dict[str, int] = field(default_factory=dict)
    alignment: dict[str, AlignmentReport] = field(default_factory=dict)
    separability: dict[str, SeparabilityReport] = field(default_factory=dict)

    @property
    def counts_match(self) -> bool:
        return all(self.counts[label] == value for label, value in self.closed_forms.items())

    @property
    def all_contained(self) -> bool:
        return all(report.contained for report in self.alignment.values())

    @property
    def all_separable(self) -> bool:
        return all(report.separable for report in self.separability.values())

    @property
    def passed(self) -> bool:
        return self.counts_match and self.all_contained and self.all_separable

    def to_dict(self) -> dict[str, Any]:
        return {
            "scheme": self.scheme.value,
            "K": self.K,
            "M": self.M,
            "n": self.n,
            "counts": dict(self.counts),
            "closed_forms": dict(self.closed_forms),
            "alignment": {label: report.to_dict() for label, report in self.alignment.items()},
            "separability": {label: report.to_dict() for label, report in self.separability.items()},
            "passed": self.passed,
        }


def check_scheme_alignment(
    scheme: Scheme | str,
    K: int,
    M: int,
    n: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> SchemeAlignmentSummary:
    """
    Generate every direction set of a gic, uplink or x scheme and run the
    containment and separability checks at every receiver.
    """
    scheme = Scheme(scheme)
    if scheme == Scheme.GIC:
        return _check_gic_scheme(K, n, cap)
    if scheme == Scheme.UPLINK:
        return _check_uplink_scheme(K, M, n, cap)
    if scheme == Scheme.X:
        return _check_x_scheme(K, M, n, cap)
    raise InvalidDims(f"scheme {scheme.value} has no generator-level check; use receiver layouts")


def _check_gic_scheme(K: int, n: int, cap: int) -> SchemeAlignmentSummary:
    summary = SchemeAlignmentSummary(scheme=Scheme.GIC, K=K, M=1, n=n)
    target = gic_interference_directions(K, n, cap=cap)
    summary.counts["interference"] = len(target)
    summary.closed_forms["interference"] = gic_interference_count(K, n)

    transmit = [gic_transmit_directions(K, n, k, cap=cap) for k in range(K)]
    for k, directions in enumerate(transmit):
        summary.counts[f"tx={k}"] = len(directions)
        summary.closed_forms[f"tx={k}"] = gic_transmit_count(K, n)

    for i in range(K):
        for k in range(K):
            if k != i:
                summary.alignment[f"rx={i}<-tx={k}"] = verify_alignment(shift(transmit[k], GainId(i, k)), target)
        intended = shift(transmit[i], GainId(i, i))
        summary.separability[f"rx={i}"] = verify_separability(intended, target)
    return summary


def _check_uplink_scheme(K: int, M: int, n: int, cap: int) -> SchemeAlignmentSummary:
    summary = SchemeAlignmentSummary(scheme=Scheme.UPLINK, K=K, M=M, n=n)
    target = uplink_interference_directions(K, M, n, cap=cap)
    summary.counts["interference"] = len(target)
    summary.closed_forms["interference"] = uplink_interference_count(K, M, n)

    transmit: dict[int, DirectionSet] = {}
    for k in range(K):
        for m in range(M):
            own = k * M + m
            transmit[own] = uplink_transmit_directions(K, M, n, k, m, cap=cap)
            summary.counts[f"tx={own}"] = len(transmit[own])
            summary.closed_forms[f"tx={own}"] = uplink_transmit_count(K, M, n)

    for i in range(K):
        for own, directions in transmit.items():
            if own // M != i:
                summary.alignment[f"rx={i}<-tx={own}"] = verify_alignment(
                    shift(directions, GainId(i, own)), target
                )
        intended = uplink_intended_directions(K, M, n, i, cap=cap)
        summary.separability[f"rx={i}"] = verify_separability(intended, target)
    return summary


def _check_x_scheme(K: int, M: int, n: int, cap: int) -> SchemeAlignmentSummary:
    summary = SchemeAlignmentSummary(scheme=Scheme.X, K=K, M=M, n=n)
    transmit = {
        (r, i): x_transmit_directions(K, M, n, r, i, cap=cap)
        for r in range(M)
        for i in range(K)
    }
    for (r, i), directions in transmit.items():
        summary.counts[f"msg={r},{i}"] = len(directions)
        summary.closed_forms[f"msg={r},{i}"] = x_transmit_count(K, M, n)

    for r in range(M):
        blocks = x_interference_blocks(K, M, n, r, cap=cap)
        intended = x_intended_directions(K, M, n, r, cap=cap)
        for other, block in blocks.items():
            summary.counts[f"rx={r}:block={other}"] = len(block)
            summary.closed_forms[f"rx={r}:block={other}"] = x_block_count(K, M, n)
            for i in range(K):
                arriving = shift(shift(transmit[(other, i)], GainId(other, i)), GainId(r, i))
                summary.alignment[f"rx={r}<-msg={other},{i}"] = verify_alignment(arriving, block)
            summary.separability[f"rx={r}:block={other}"] = verify_separability(intended, block)
    return summary


__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "G0_GAIN",
    "enumerate_box",
    "box_size",
    "gic_transmit_count",
    "gic_interference_count",
    "uplink_transmit_count",
    "uplink_interference_count",
    "x_transmit_count",
    "x_block_count",
    "gic_transmit_directions",
    "gic_interference_directions",
    "gic_intended_directions",
    "uplink_transmit_directions",
    "uplink_interference_directions",
    "uplink_intended_directions",
    "x_transmit_directions",
    "x_interference_blocks",
    "x_interference_directions",
    "x_intended_directions",
    "threeuser_caseII_directions",
    "threeuser_caseI_directions",
    "threeuser_caseII_dof",
    "shift",
    "alignment_efficiency",
    "verify_alignment",
    "verify_separability",
    "has_direct_gain",
    "uplink_has_direct_gain",
    "SchemeAlignmentSummary",
    "check_scheme_alignment",
]
