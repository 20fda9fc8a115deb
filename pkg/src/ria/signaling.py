"""
Integer-constellation signaling chain for RealAlign.

This module provides:

- ``StreamPlan``: which transmitter sends which integer stream, along which
  transmit direction, to which receiver, for every supported scheme
- ``ReceiverLayout``: per-receiver intended directions and aligned
  interference directions with exact fold counts, plus algebraic folding
- ``ConstellationSpec``: Q and A derived from (P, gamma, epsilon, m) and the
  evaluated transmit directions
- ``ReceivedConstellation``: every noiseless received point, its minimum
  distance and the many-to-one map back to intended symbol tuples
- encoding, the Gaussian channel and nearest-point hard decoding

Conventions:
- symbols are integers in [-Q, Q]
- interference symbols are the signed sums of the contributing streams'
  symbols, never sampled independently
- ties in hard decoding go to the smaller point
- logarithms are base 2
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from .alignment import (
    DEFAULT_ENUMERATION_CAP,
    G0_GAIN,
    gic_transmit_directions,
    threeuser_caseI_directions,
    threeuser_caseII_directions,
    uplink_transmit_directions,
    verify_alignment,
    verify_separability,
    x_transmit_directions,
)
from .channel import (
    DEFAULT_GAIN_DISTRIBUTION,
    MAX_RESAMPLE_ATTEMPTS,
    SEPARATION_REL_TOL,
    ChannelRealization,
    GainDistribution,
    MinimalPolynomial,
    assert_separated,
    channel_shape,
    derived_seed,
    evaluate_direction,
    evaluate_directions,
    sample_realization,
)
from .errors import CapExceeded, DegreeMismatch, Degenerate, InvalidSpec, SymbolOutOfRange
from .schemas import (
    AlignmentReport,
    DirectionSet,
    ExponentVector,
    GainId,
    Role,
    Scheme,
    SeparabilityReport,
)


DEFAULT_EPSILON = 0.05
DEFAULT_CONSTELLATION_CAP = 10**7
COLLISION_REL_TOL = 1e-9


# ------------------------- #
#        STREAM PLANS       #
# ------------------------- #

@dataclass(frozen=True)
class StreamSpec:
    stream_id: int
    tx: int
    rx: int
    direction: ExponentVector

    def to_dict(self) -> dict[str, Any]:
        return {
            "stream_id": self.stream_id,
            "tx": self.tx,
            "rx": self.rx,
            "direction": self.direction.to_text(),
        }


@dataclass(frozen=True)
class StreamPlan:
    """
    Streams of one scheme.

    ``unit_gains`` are gains known to equal exactly 1 (standard-form cross
    gains, the reference user of a multiple-access channel); crossing them
    leaves a direction unchanged.
    """

    scheme: Scheme
    K: int
    M: int
    n: int
    num_rx: int
    num_tx: int
    streams: tuple[StreamSpec, ...]
    unit_gains: frozenset[GainId] = frozenset()
    algebraic_degree: Optional[int] = None

    def streams_of(self, tx: int) -> tuple[StreamSpec, ...]:
        return tuple(stream for stream in self.streams if stream.tx == tx)

    def streams_for(self, rx: int) -> tuple[StreamSpec, ...]:
        return tuple(stream for stream in self.streams if stream.rx == rx)

    def traversed(self, rx: int, tx: int) -> ExponentVector:
        gain = GainId(rx, tx)
        if gain in self.unit_gains:
            return ExponentVector.unit()
        return ExponentVector.of(gain)

    def received_direction(self, stream: StreamSpec, rx: int) -> ExponentVector:
        return stream.direction.multiply(self.traversed(rx, stream.tx))

    def transmit_values(self, h: ChannelRealization) -> list[list[float]]:
        """Evaluated transmit directions grouped per transmitter."""
        grouped: list[list[float]] = [[] for _ in range(self.num_tx)]
        for stream in self.streams:
            grouped[stream.tx].append(evaluate_direction(h, stream.direction))
        return grouped

    def to_dict(self) -> dict[str, Any]:
        return {
            "scheme": self.scheme.value,
            "K": self.K,
            "M": self.M,
            "n": self.n,
            "num_rx": self.num_rx,
            "num_tx": self.num_tx,
            "stream_count": len(self.streams),
            "unit_gains": sorted(gain.to_token() for gain in self.unit_gains),
            "algebraic_degree": self.algebraic_degree,
        }


_STANDARD_UNIT_GAINS = frozenset(
    GainId(rx, tx) for rx, tx in ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0))
)


def build_stream_plan(
    scheme: Scheme | str,
    K: int = 2,
    M: int = 1,
    n: int = 1,
    *,
    algebraic_degree: Optional[int] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> StreamPlan:
    """
    Build the stream plan of a scheme.

    - gic: user i sends its transmit set to receiver i
    - uplink: user (k, m) on column k*M + m sends to base station k
    - x: the message from transmitter i to receiver r leaves along h_ri * T
    - three-user: Case II sets over G0, or Case I basis sets when
      ``algebraic_degree`` is given
    - mac: every user sends one stream along 1
    - two-user-x: x0 = h11 u0 + h01 v0, x1 = h10 u1 + h00 v1 (u for receiver 0)
    - p2p: one stream along 1
    """
    scheme = Scheme(scheme)
    entries: list[tuple[int, int, ExponentVector]] = []
    unit_gains: frozenset[GainId] = frozenset()

    if scheme == Scheme.GIC:
        for i in range(K):
            entries.extend((i, i, vector) for vector in gic_transmit_directions(K, n, i, cap=cap))
    elif scheme == Scheme.UPLINK:
        for k in range(K):
            for m in range(M):
                transmit = uplink_transmit_directions(K, M, n, k, m, cap=cap)
                entries.extend((k * M + m, k, vector) for vector in transmit)
    elif scheme == Scheme.X:
        for i in range(K):
            for r in range(M):
                transmit = x_transmit_directions(K, M, n, r, i, cap=cap)
                entries.extend((i, r, vector.shift(GainId(r, i))) for vector in transmit)
    elif scheme == Scheme.THREE_USER:
        K, M = 3, 1
        if algebraic_degree is None:
            sets = threeuser_caseII_directions(n)
        else:
            sets = threeuser_caseI_directions(algebraic_degree)
            n = algebraic_degree
        for i, directions in enumerate(sets):
            entries.extend((i, i, vector) for vector in directions)
        unit_gains = _STANDARD_UNIT_GAINS
    elif scheme == Scheme.MAC:
        M = 1
        entries.extend((i, 0, ExponentVector.unit()) for i in range(K))
        unit_gains = frozenset({GainId(0, 0)})
    elif scheme == Scheme.TWO_USER_X:
        K, M = 2, 2
        entries.extend(
            [
                (0, 0, ExponentVector.of(GainId(1, 1))),
                (0, 1, ExponentVector.of(GainId(0, 1))),
                (1, 0, ExponentVector.of(GainId(1, 0))),
                (1, 1, ExponentVector.of(GainId(0, 0))),
            ]
        )
    else:
        K, M = 1, 1
        entries.append((0, 0, ExponentVector.unit()))
        unit_gains = frozenset({GainId(0, 0)})

    num_rx, num_tx = channel_shape(scheme, K, M)
    streams = tuple(
        StreamSpec(stream_id=index, tx=tx, rx=rx, direction=direction)
        for index, (tx, rx, direction) in enumerate(entries)
    )
    return StreamPlan(
        scheme=scheme,
        K=K,
        M=M,
        n=n,
        num_rx=num_rx,
        num_tx=num_tx,
        streams=streams,
        unit_gains=unit_gains,
        algebraic_degree=algebraic_degree if scheme == Scheme.THREE_USER else None,
    )


# ------------------------- #
#     RECEIVER LAYOUTS      #
# ------------------------- #

@dataclass(frozen=True)
class IntendedDirection:
    direction: ExponentVector
    stream_id: int


@dataclass(frozen=True)
class InterferenceDirection:
    """
    One aligned interference direction.

    Its symbol is sum(weight * u_stream) over ``contributions``; plain
    alignment has unit weights, algebraic folding introduces others.
    """

    direction: ExponentVector
    contributions: tuple[tuple[int, int], ...]

    @property
    def fold_count(self) -> int:
        return sum(abs(weight) for _, weight in self.contributions)

    @property
    def stream_ids(self) -> tuple[int, ...]:
        return tuple(stream_id for stream_id, _ in self.contributions)


@dataclass(frozen=True)
class ReceiverLayout:
    """
    Directions seen at one receiver.

    ``scale`` is the integer the observation is multiplied by before
    decoding (1 unless algebraic folding was applied).
    """

    rx: int
    intended: tuple[IntendedDirection, ...]
    interference: tuple[InterferenceDirection, ...]
    scale: int = 1

    @property
    def L(self) -> int:
        return len(self.intended)

    @property
    def L_prime(self) -> int:
        return len(self.interference)

    @property
    def total_directions(self) -> int:
        return self.L + self.L_prime

    @property
    def f(self) -> int:
        return max((item.fold_count for item in self.interference), default=1)

    @property
    def contains_unit(self) -> bool:
        unit = ExponentVector.unit()
        return any(item.direction == unit for item in self.intended + self.interference)

    @property
    def stream_ids(self) -> tuple[int, ...]:
        return tuple(item.stream_id for item in self.intended)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rx": self.rx,
            "L": self.L,
            "L_prime": self.L_prime,
            "f": self.f,
            "scale": self.scale,
            "contains_unit": self.contains_unit,
            "intended": [
                {"direction": item.direction.to_text(), "stream_id": item.stream_id}
                for item in self.intended
            ],
            "interference": [
                {
                    "direction": item.direction.to_text(),
                    "fold_count": item.fold_count,
                    "contributions": [list(pair) for pair in item.contributions],
                }
                for item in self.interference
            ],
        }


def _check_symbolic(intended: Sequence[IntendedDirection], interference: Sequence[InterferenceDirection]) -> None:
    seen: dict[ExponentVector, int] = {}
    for item in intended:
        if item.direction in seen:
            raise Degenerate(
                f"streams {seen[item.direction]} and {item.stream_id} share the intended "
                f"direction {item.direction.to_text()}"
            )
        seen[item.direction] = item.stream_id
    for item in interference:
        if item.direction in seen:
            raise Degenerate(
                f"interference direction {item.direction.to_text()} collides with stream {seen[item.direction]}"
            )


def build_receiver_layout(
    plan: StreamPlan,
    rx: int,
    h: Optional[ChannelRealization] = None,
    *,
    rel_tol: float = SEPARATION_REL_TOL,
) -> ReceiverLayout:
    """
    Collect the received directions at ``rx``.

    Intended streams keep one direction each; interfering streams landing on
    the same monomial are aligned and counted. With ``h`` the evaluated
    directions also pass the near-collision guard.
    """
    if not 0 <= rx < plan.num_rx:
        raise InvalidSpec(f"receiver {rx} out of range for {plan.num_rx} receivers")
    intended: list[IntendedDirection] = []
    aligned: dict[ExponentVector, list[int]] = {}
    for stream in plan.streams:
        received = plan.received_direction(stream, rx)
        if stream.rx == rx:
            intended.append(IntendedDirection(received, stream.stream_id))
        else:
            aligned.setdefault(received, []).append(stream.stream_id)

    intended.sort(key=lambda item: (item.direction, item.stream_id))
    interference = [
        InterferenceDirection(direction, tuple((stream_id, 1) for stream_id in sorted(ids)))
        for direction, ids in sorted(aligned.items())
    ]
    _check_symbolic(intended, interference)
    layout = ReceiverLayout(rx=rx, intended=tuple(intended), interference=tuple(interference))
    if h is not None:
        check_layout_separation(layout, h, rel_tol=rel_tol)
    return layout


def build_receiver_layouts(
    plan: StreamPlan,
    h: Optional[ChannelRealization] = None,
    *,
    rel_tol: float = SEPARATION_REL_TOL,
) -> tuple[ReceiverLayout, ...]:
    return tuple(build_receiver_layout(plan, rx, h, rel_tol=rel_tol) for rx in range(plan.num_rx))


def check_layout_separation(
    layout: ReceiverLayout,
    h: ChannelRealization,
    *,
    rel_tol: float = SEPARATION_REL_TOL,
) -> None:
    values, _ = layout_coefficients(layout, h)
    assert_separated(values, rel_tol=rel_tol)


def fold_receiver_layout(
    layout: ReceiverLayout,
    p: MinimalPolynomial,
    generator: GainId = G0_GAIN,
) -> ReceiverLayout:
    """
    Rewrite the interference direction generator**d through a_d g^d = -sum a_j g^j.

    The observation is scaled by a_d: every other coefficient is multiplied by
    a_d and the contributions of the top direction move onto the basis with
    weight -a_j. Layouts without a top-power direction come back unchanged.
    """
    d = p.degree
    top: Optional[InterferenceDirection] = None
    for item in layout.interference:
        power = item.direction.power_of(generator)
        if power is not None and power > d:
            raise DegreeMismatch(
                f"direction {item.direction.to_text()} exceeds the polynomial degree {d}"
            )
        if power == d:
            top = item
    if top is None:
        return layout

    a_d = p.leading
    folded: dict[ExponentVector, dict[int, int]] = {}
    for item in layout.interference:
        if item is top:
            continue
        weights = folded.setdefault(item.direction, {})
        for stream_id, weight in item.contributions:
            weights[stream_id] = weights.get(stream_id, 0) + a_d * weight
    for j in range(d):
        a_j = p.coeffs[j]
        if a_j == 0:
            continue
        weights = folded.setdefault(ExponentVector.of(generator, j), {})
        for stream_id, weight in top.contributions:
            weights[stream_id] = weights.get(stream_id, 0) - a_j * weight

    interference = []
    for direction, weights in sorted(folded.items()):
        contributions = tuple(sorted((sid, w) for sid, w in weights.items() if w != 0))
        if contributions:
            interference.append(InterferenceDirection(direction, contributions))
    _check_symbolic(layout.intended, interference)
    return ReceiverLayout(
        rx=layout.rx,
        intended=layout.intended,
        interference=tuple(interference),
        scale=layout.scale * a_d,
    )


def _layout_set(plan: StreamPlan, vectors: Iterable[ExponentVector], role: Role, rx: int) -> DirectionSet:
    return DirectionSet.build(vectors, scheme=plan.scheme, K=plan.K, M=plan.M, n=plan.n, role=role, owners=(rx,))


def verify_layout(
    plan: StreamPlan,
    layout: ReceiverLayout,
    minimal_polynomial: Optional[MinimalPolynomial] = None,
    generator: GainId = G0_GAIN,
) -> tuple[AlignmentReport, SeparabilityReport]:
    """
    Recheck a (possibly folded) layout against the plan it came from.

    Every interfering stream's received direction must land in the layout's
    interference set; with ``minimal_polynomial`` a top-power direction is
    replaced by the basis terms it folds onto. Intended directions must not
    meet the interference set.
    """
    received: list[ExponentVector] = []
    for stream in plan.streams:
        if stream.rx == layout.rx:
            continue
        direction = plan.received_direction(stream, layout.rx)
        if minimal_polynomial is not None and direction.power_of(generator) == minimal_polynomial.degree:
            received.extend(
                ExponentVector.of(generator, j)
                for j, a_j in enumerate(minimal_polynomial.coeffs[:-1])
                if a_j != 0
            )
        else:
            received.append(direction)

    interference = _layout_set(plan, (item.direction for item in layout.interference), Role.INTERFERENCE, layout.rx)
    intended = _layout_set(plan, (item.direction for item in layout.intended), Role.INTENDED, layout.rx)
    alignment = verify_alignment(_layout_set(plan, received, Role.RECEIVED, layout.rx), interference)
    return alignment, verify_separability(intended, interference)


def layout_coefficients(layout: ReceiverLayout, h: ChannelRealization) -> tuple[np.ndarray, list[int]]:
    """
    Evaluated direction coefficients of the scaled observation and the
    symbol multipliers (1 for intended, fold count for interference).
    """
    intended = layout.scale * evaluate_directions(h, (item.direction for item in layout.intended))
    interference = evaluate_directions(h, (item.direction for item in layout.interference))
    folds = [1] * layout.L + [item.fold_count for item in layout.interference]
    return np.concatenate([intended, interference]), folds


def required_m(layouts: Iterable[ReceiverLayout], *, unit_padding: bool = False) -> int:
    """
    Maximum received directions over the receivers; with ``unit_padding``
    one virtual unit stream is added when some receiver lacks direction 1.
    """
    layout_list = list(layouts)
    m = max(layout.total_directions for layout in layout_list)
    if unit_padding and not all(layout.contains_unit for layout in layout_list):
        m += 1
    return m


@dataclass(frozen=True)
class RealizedPlan:
    """A plan bound to a channel realization that passed the separation guard."""

    plan: StreamPlan
    h: ChannelRealization
    layouts: tuple[ReceiverLayout, ...]
    attempts: int = 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "plan": self.plan.to_dict(),
            "channel": self.h.to_dict(),
            "layouts": [layout.to_dict() for layout in self.layouts],
            "attempts": self.attempts,
        }


def _bind_layouts(
    plan: StreamPlan,
    h: ChannelRealization,
    minimal_polynomial: Optional[MinimalPolynomial],
    rel_tol: float,
) -> tuple[ReceiverLayout, ...]:
    layouts = build_receiver_layouts(plan)
    if minimal_polynomial is not None:
        layouts = tuple(fold_receiver_layout(layout, minimal_polynomial) for layout in layouts)
    for layout in layouts:
        check_layout_separation(layout, h, rel_tol=rel_tol)
    return layouts


def realize_plan(
    plan: StreamPlan,
    distribution: GainDistribution = DEFAULT_GAIN_DISTRIBUTION,
    seed: int = 0,
    *,
    h: Optional[ChannelRealization] = None,
    minimal_polynomial: Optional[MinimalPolynomial] = None,
    max_attempts: int = MAX_RESAMPLE_ATTEMPTS,
    rel_tol: float = SEPARATION_REL_TOL,
    on_resample: Optional[Callable[[int, int, Degenerate], None]] = None,
) -> RealizedPlan:
    """
    Bind ``plan`` to a channel.

    A supplied ``h`` (constructed or loaded from file) must pass the
    near-collision guard on the first try. Sampled channels are redrawn with
    derived seeds up to ``max_attempts`` times; ``on_resample`` receives
    (attempt, seed, error) for each rejected draw.
    """
    if h is not None:
        if (h.num_rx, h.num_tx) != (plan.num_rx, plan.num_tx):
            raise InvalidSpec(
                f"channel is {h.num_rx}x{h.num_tx} but the {plan.scheme.value} plan needs "
                f"{plan.num_rx}x{plan.num_tx}"
            )
        return RealizedPlan(plan, h, _bind_layouts(plan, h, minimal_polynomial, rel_tol))

    last_error: Optional[Degenerate] = None
    for attempt in range(max(1, max_attempts)):
        attempt_seed = derived_seed(seed, attempt)
        sampled = sample_realization(plan.scheme, plan.K, plan.M, distribution, attempt_seed)
        try:
            layouts = _bind_layouts(plan, sampled, minimal_polynomial, rel_tol)
        except Degenerate as exc:
            last_error = exc
            if on_resample is not None:
                on_resample(attempt, attempt_seed, exc)
            continue
        return RealizedPlan(plan, sampled, layouts, attempts=attempt + 1)
    raise Degenerate(f"no separable realization after {max_attempts} attempts: {last_error}")


# ------------------------- #
#   CONSTELLATION PARAMS    #
# ------------------------- #

@dataclass(frozen=True)
class ConstellationSpec:
    P: float
    gamma: float
    epsilon: float
    m: int
    Q: int
    A: float
    zeta: float
    xi: float
    lambdas: tuple[float, ...]

    def power_bound(self, tx: int) -> float:
        """A^2 Q^2 lambda_tx, an upper bound on E[x_tx^2]."""
        return self.A**2 * self.Q**2 * self.lambdas[tx]

    def to_dict(self) -> dict[str, Any]:
        return {
            "P": self.P,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "m": self.m,
            "Q": self.Q,
            "A": self.A,
            "zeta": self.zeta,
            "xi": self.xi,
            "lambdas": list(self.lambdas),
        }


def derive_params(
    P: float,
    gamma: float,
    epsilon: float,
    m: int,
    transmit_values: Sequence[Sequence[float]],
) -> ConstellationSpec:
    """
    Q = max(1, floor(gamma * P^((1-eps)/(2(m+eps))))) and A = zeta sqrt(P) / Q.

    lambda_i = sum_l T_il^2 and zeta = min_i 1/max(lambda_i, sqrt(lambda_i)),
    which keeps A^2 Q^2 lambda_i <= P for every transmitter.
    """
    if not (P > 0 and gamma > 0 and epsilon >= 0 and m >= 1):
        raise InvalidSpec(f"need P > 0, gamma > 0, epsilon >= 0, m >= 1; got {P}, {gamma}, {epsilon}, {m}")
    lambdas = tuple(float(math.fsum(value * value for value in values)) for values in transmit_values)
    if not lambdas or any(not lam > 0 or not math.isfinite(lam) for lam in lambdas):
        raise InvalidSpec("every transmitter needs at least one finite nonzero transmit direction")

    raw = gamma * P ** ((1.0 - epsilon) / (2.0 * (m + epsilon)))
    Q = math.floor(raw)
    if math.isclose(raw, Q + 1, rel_tol=1e-12):
        Q += 1
    Q = max(1, int(Q))

    zeta = min(1.0 / max(lam, math.sqrt(lam)) for lam in lambdas)
    A = zeta * math.sqrt(P) / Q
    xi = A / P ** ((m - 1 + 2.0 * epsilon) / (2.0 * (m + epsilon)))
    return ConstellationSpec(
        P=float(P),
        gamma=float(gamma),
        epsilon=float(epsilon),
        m=int(m),
        Q=Q,
        A=A,
        zeta=zeta,
        xi=xi,
        lambdas=lambdas,
    )


# ------------------------- #
#  RECEIVED CONSTELLATION   #
# ------------------------- #

@dataclass(frozen=True, eq=False)
class ReceivedConstellation:
    """
    Sorted noiseless received points of one receiver.

    ``labels[k]`` is the mixed-radix index (base 2Q+1, first intended stream
    most significant) of the intended tuple carried by ``points[k]``.
    """

    rx: int
    points: np.ndarray
    labels: np.ndarray
    stream_ids: tuple[int, ...]
    Q: int
    A: float
    d_min: float
    scale: int = 1

    @property
    def size(self) -> int:
        return int(self.points.size)

    @property
    def radix(self) -> int:
        return 2 * self.Q + 1

    def label_of(self, symbols: Sequence[int]) -> int:
        label = 0
        for symbol in symbols:
            if abs(int(symbol)) > self.Q:
                raise SymbolOutOfRange(f"symbol {symbol} outside [-{self.Q}, {self.Q}]")
            label = label * self.radix + int(symbol) + self.Q
        return label

    def symbols_of(self, label: int) -> tuple[int, ...]:
        digits: list[int] = []
        for _ in self.stream_ids:
            label, digit = divmod(int(label), self.radix)
            digits.append(digit - self.Q)
        return tuple(reversed(digits))

    def intended_tuple(self, point_index: int) -> tuple[int, ...]:
        return self.symbols_of(int(self.labels[point_index]))

    def labels_to_symbols(self, labels: np.ndarray) -> np.ndarray:
        """(trials,) labels to a (trials, L) integer array of symbols."""
        labels = np.asarray(labels, dtype=np.int64)
        out = np.empty((labels.size, len(self.stream_ids)), dtype=np.int64)
        rest = labels.copy()
        for column in range(len(self.stream_ids) - 1, -1, -1):
            rest, digit = np.divmod(rest, self.radix)
            out[:, column] = digit - self.Q
        return out


def _exact_gap(values: Sequence[float], delta: Sequence[int]) -> float:
    return abs(math.fsum(float(v) * int(d) for v, d in zip(values, delta)))


def build_received_constellation(
    layout: ReceiverLayout,
    h: ChannelRealization,
    spec: ConstellationSpec,
    *,
    cap: int = DEFAULT_CONSTELLATION_CAP,
    rel_tol: float = COLLISION_REL_TOL,
) -> ReceivedConstellation:
    """
    Enumerate A (sum T u + sum T' u') over every intended tuple and every
    interference symbol in [-f Q, f Q].

    Coincident points carrying the same intended tuple are merged; coincident
    points carrying different tuples make the layout Degenerate.
    """
    Q = spec.Q
    if Q < 1:
        raise InvalidSpec("Q must be >= 1")
    values, folds = layout_coefficients(layout, h)
    radices = [2 * f * Q + 1 for f in folds]
    size = math.prod(radices)
    if size > cap:
        raise CapExceeded(f"received constellation of {size} points exceeds cap {cap}")

    sums = np.zeros(1, dtype=float)
    for value, f in zip(values, folds):
        steps = np.arange(-f * Q, f * Q + 1, dtype=float)
        sums = (sums[:, None] + value * steps[None, :]).ravel()

    order = np.argsort(sums, kind="stable")
    ordered = sums[order]
    tail = math.prod(radices[layout.L:])
    labels = order // tail

    keep = np.ones(ordered.size, dtype=bool)
    if ordered.size > 1:
        gaps = np.diff(ordered)
        magnitude = np.maximum(np.maximum(np.abs(ordered[:-1]), np.abs(ordered[1:])), 1.0)
        close = np.nonzero(gaps <= rel_tol * magnitude)[0]
        for k in close:
            if labels[k] != labels[k + 1]:
                raise Degenerate(
                    f"rx {layout.rx}: intended tuples {int(labels[k])} and {int(labels[k + 1])} "
                    "land on the same received point"
                )
            keep[k + 1] = False

    kept_order = order[keep]
    points = spec.A * ordered[keep]
    d_min = math.inf
    if points.size > 1:
        k = int(np.argmin(np.diff(ordered[keep])))
        upper = np.array(np.unravel_index(int(kept_order[k + 1]), radices))
        lower = np.array(np.unravel_index(int(kept_order[k]), radices))
        d_min = spec.A * _exact_gap(values, upper - lower)

    return ReceivedConstellation(
        rx=layout.rx,
        points=points,
        labels=labels[keep].astype(np.int64),
        stream_ids=layout.stream_ids,
        Q=Q,
        A=spec.A,
        d_min=d_min,
        scale=layout.scale,
    )


def min_distance_direct(
    values: Sequence[float],
    fold_bounds: Sequence[int],
    Q: int,
    A: float,
    *,
    cap: int = DEFAULT_CONSTELLATION_CAP,
) -> float:
    """
    min A |sum_l T_l delta_l| over nonzero integer vectors with
    |delta_l| <= 2 f_l Q.
    """
    if len(values) != len(fold_bounds) or not len(values):
        raise InvalidSpec("need one fold bound per direction and at least one direction")
    radices = [4 * int(f) * Q + 1 for f in fold_bounds]
    size = math.prod(radices)
    if size > cap:
        raise CapExceeded(f"difference box of {size} vectors exceeds cap {cap}")

    sums = np.zeros(1, dtype=float)
    for value, f in zip(values, fold_bounds):
        steps = np.arange(-2 * f * Q, 2 * f * Q + 1, dtype=float)
        sums = (sums[:, None] + float(value) * steps[None, :]).ravel()
    magnitudes = np.abs(sums)
    magnitudes[(size - 1) // 2] = np.inf
    k = int(np.argmin(magnitudes))
    offsets = np.array([2 * int(f) * Q for f in fold_bounds])
    delta = np.array(np.unravel_index(k, radices)) - offsets
    return A * _exact_gap(values, delta)


# ------------------------- #
#   ENCODE / CHANNEL / DEC  #
# ------------------------- #

def encode(
    symbols: Sequence[int],
    directions: Sequence[ExponentVector],
    h: ChannelRealization,
    spec: ConstellationSpec,
) -> float:
    """x = A sum_l T_l u_l for one transmitter."""
    if len(symbols) != len(directions):
        raise InvalidSpec(f"{len(symbols)} symbols for {len(directions)} directions")
    total = 0.0
    for symbol, direction in zip(symbols, directions):
        if abs(int(symbol)) > spec.Q:
            raise SymbolOutOfRange(f"symbol {symbol} outside [-{spec.Q}, {spec.Q}]")
        total += evaluate_direction(h, direction) * int(symbol)
    return spec.A * total


def encode_plan(
    plan: StreamPlan,
    h: ChannelRealization,
    spec: ConstellationSpec,
    symbols: Sequence[int],
) -> np.ndarray:
    """Transmit signals of every transmitter; ``symbols`` is indexed by stream id."""
    x = np.zeros(plan.num_tx, dtype=float)
    for tx in range(plan.num_tx):
        streams = plan.streams_of(tx)
        x[tx] = encode(
            [symbols[stream.stream_id] for stream in streams],
            [stream.direction for stream in streams],
            h,
            spec,
        )
    return x


def transmit_and_receive(
    h: ChannelRealization,
    x: Sequence[float] | np.ndarray,
    noise_std: float,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """y_j = sum_i h_ji x_i + z_j with z_j ~ N(0, noise_std^2)."""
    if noise_std < 0:
        raise InvalidSpec(f"noise_std must be >= 0, got {noise_std}")
    y = h.matrix() @ np.asarray(x, dtype=float)
    if noise_std > 0:
        if rng is None:
            raise InvalidSpec("a random generator is required when noise_std > 0")
        y = y + noise_std * rng.standard_normal(h.num_rx)
    return y


def nearest_point_indices(points: np.ndarray, observations: np.ndarray | float) -> np.ndarray:
    """Index of the nearest sorted point; ties go to the smaller point."""
    ys = np.atleast_1d(np.asarray(observations, dtype=float))
    upper = np.searchsorted(points, ys, side="left")
    hi = np.clip(upper, 0, points.size - 1)
    lo = np.clip(upper - 1, 0, points.size - 1)
    take_lo = np.abs(ys - points[lo]) <= np.abs(points[hi] - ys)
    return np.where(take_lo, lo, hi)


def decode_labels(rc: ReceivedConstellation, observations: np.ndarray) -> np.ndarray:
    scaled = np.asarray(observations, dtype=float) * rc.scale
    return rc.labels[nearest_point_indices(rc.points, scaled)]


def hard_decode(rc: ReceivedConstellation, y: float) -> tuple[int, ...]:
    """Intended symbol tuple of the nearest received point."""
    index = int(nearest_point_indices(rc.points, float(y) * rc.scale)[0])
    return rc.intended_tuple(index)


__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_CONSTELLATION_CAP",
    "COLLISION_REL_TOL",
    "StreamSpec",
    "StreamPlan",
    "build_stream_plan",
    "IntendedDirection",
    "InterferenceDirection",
    "ReceiverLayout",
    "build_receiver_layout",
    "build_receiver_layouts",
    "check_layout_separation",
    "fold_receiver_layout",
    "verify_layout",
    "layout_coefficients",
    "required_m",
    "RealizedPlan",
    "realize_plan",
    "ConstellationSpec",
    "derive_params",
    "ReceivedConstellation",
    "build_received_constellation",
    "min_distance_direct",
    "encode",
    "encode_plan",
    "transmit_and_receive",
    "nearest_point_indices",
    "decode_labels",
    "hard_decode",
]
