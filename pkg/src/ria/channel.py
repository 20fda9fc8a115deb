"""
Channel realizations for RealAlign.

This module provides:

- ``ChannelRealization``: the real gain matrix of one scheme topology, with a
  self-describing text record for ``--channel-file``
- seeded gain sampling from uniform, signed-uniform and log-uniform laws
- numeric evaluation of monomial directions
- the three-user standard-form reduction (G0..G3) and the standard channel
- algebraic (Case I) folding of the top power of G0 through an integer
  minimal polynomial

Matrix layout per scheme (rows are receivers, columns transmitters):

- gic: K x K
- uplink: K x (K*M), column = cell*M + user
- x: M x K
- three-user: 3 x 3 standard channel [[G1,1,1],[1,G2,1],[1,G0,G3]]
- mac: 1 x K with the first gain fixed to 1
- two-user-x: 2 x 2
- p2p: 1 x 1 unit gain

Sampled realizations are deterministic in (scheme, dims, distribution, seed).
Case I realizations are constructed from a minimal polynomial, never sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DegreeMismatch,
    Degenerate,
    DivisionDegenerate,
    IntegerOverflow,
    InvalidDims,
    InvalidDistribution,
    InvalidSpec,
    UnknownGain,
)
from .schemas import ExponentVector, GainId, Scheme


CHANNEL_RECORD_HEADER = "# realign channel v1"
DIVISION_TOLERANCE = 1e-300
SEPARATION_REL_TOL = 1e-9
MAX_RESAMPLE_ATTEMPTS = 16
_INT64_MAX = 2**63 - 1


# ------------------------- #
#    GAIN DISTRIBUTIONS     #
# ------------------------- #

class DistributionKind(str, Enum):
    UNIFORM = "uniform"
    SIGNED_UNIFORM = "signed-uniform"
    LOG_UNIFORM = "log-uniform"


@dataclass(frozen=True)
class GainDistribution:
    """
    Law of every i.i.d. channel gain.

    - uniform: U[lo, hi], which must not contain 0
    - signed-uniform: magnitude U[lo, hi] with a fair random sign, lo > 0
    - log-uniform: exp(U[log lo, log hi]), lo > 0
    """

    kind: DistributionKind = DistributionKind.UNIFORM
    lo: float = 0.5
    hi: float = 2.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", DistributionKind(self.kind))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.lo >= self.hi:
            raise InvalidDistribution(f"need finite lo < hi, got ({self.lo}, {self.hi})")
        if self.kind == DistributionKind.UNIFORM:
            if self.lo <= 0.0 <= self.hi:
                raise InvalidDistribution(f"uniform support [{self.lo}, {self.hi}] contains 0")
        elif self.lo <= 0.0:
            raise InvalidDistribution(f"{self.kind.value} needs lo > 0, got {self.lo}")

    @staticmethod
    def parse(text: str) -> "GainDistribution":
        """Parse ``lo,hi`` or ``kind:lo,hi``."""
        kind_text, _, bounds = text.strip().rpartition(":")
        try:
            lo_text, hi_text = bounds.split(",")
            lo, hi = float(lo_text), float(hi_text)
        except ValueError as exc:
            raise InvalidDistribution(f"expected 'lo,hi' or 'kind:lo,hi', got {text!r}") from exc
        try:
            kind = DistributionKind(kind_text or DistributionKind.UNIFORM.value)
        except ValueError as exc:
            raise InvalidDistribution(f"unknown gain distribution kind: {kind_text}") from exc
        return GainDistribution(kind, lo, hi)

    def to_text(self) -> str:
        return f"{self.kind.value}:{self.lo!r},{self.hi!r}"

    def sample(self, rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
        if self.kind == DistributionKind.UNIFORM:
            return rng.uniform(self.lo, self.hi, size=shape)
        if self.kind == DistributionKind.SIGNED_UNIFORM:
            magnitude = rng.uniform(self.lo, self.hi, size=shape)
            sign = np.where(rng.random(size=shape) < 0.5, -1.0, 1.0)
            return magnitude * sign
        return np.exp(rng.uniform(math.log(self.lo), math.log(self.hi), size=shape))


DEFAULT_GAIN_DISTRIBUTION = GainDistribution()


# ------------------------- #
#      REALIZATIONS         #
# ------------------------- #

def channel_shape(scheme: Scheme | str, K: int, M: int) -> tuple[int, int]:
    """(receivers, transmitters) of the gain matrix."""
    scheme = Scheme(scheme)
    if scheme == Scheme.GIC:
        if K < 2:
            raise InvalidDims(f"gic needs K >= 2, got K={K}")
        return K, K
    if scheme == Scheme.UPLINK:
        if K < 2 or M < 1:
            raise InvalidDims(f"uplink needs K >= 2 and M >= 1, got K={K}, M={M}")
        return K, K * M
    if scheme == Scheme.X:
        if K < 2 or M < 2:
            raise InvalidDims(f"x channel needs K >= 2 and M >= 2, got K={K}, M={M}")
        return M, K
    if scheme == Scheme.THREE_USER:
        return 3, 3
    if scheme == Scheme.MAC:
        if K < 1:
            raise InvalidDims(f"mac needs K >= 1, got K={K}")
        return 1, K
    if scheme == Scheme.TWO_USER_X:
        return 2, 2
    return 1, 1


@dataclass(frozen=True)
class ChannelRealization:
    """Real gain matrix h[rx][tx] for one scheme; seed is 0 when hand-constructed."""

    scheme: Scheme
    K: int
    M: int
    gains: tuple[tuple[float, ...], ...]
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        rows, cols = channel_shape(self.scheme, self.K, self.M)
        if len(self.gains) != rows or any(len(row) != cols for row in self.gains):
            raise InvalidDims(
                f"{self.scheme.value} with K={self.K}, M={self.M} needs a {rows}x{cols} gain matrix"
            )
        for rx, row in enumerate(self.gains):
            for tx, value in enumerate(row):
                if not math.isfinite(value) or value == 0.0:
                    raise Degenerate(f"gain h[{rx}][{tx}] must be finite and nonzero, got {value}")

    @staticmethod
    def from_matrix(
        scheme: Scheme | str,
        K: int,
        M: int,
        matrix: Sequence[Sequence[float]] | np.ndarray,
        *,
        seed: int = 0,
    ) -> "ChannelRealization":
        gains = tuple(tuple(float(value) for value in row) for row in matrix)
        return ChannelRealization(Scheme(scheme), int(K), int(M), gains, int(seed))

    @property
    def num_rx(self) -> int:
        return len(self.gains)

    @property
    def num_tx(self) -> int:
        return len(self.gains[0])

    def matrix(self) -> np.ndarray:
        return np.array(self.gains, dtype=float)

    def gain(self, gain: GainId) -> float:
        if gain.rx >= self.num_rx or gain.tx >= self.num_tx:
            raise UnknownGain(f"gain {gain.to_token()} is not part of a {self.num_rx}x{self.num_tx} channel")
        return self.gains[gain.rx][gain.tx]

    def to_text(self) -> str:
        lines = [
            CHANNEL_RECORD_HEADER,
            f"scheme {self.scheme.value}",
            f"dims {self.K} {self.M}",
            f"seed {self.seed}",
            f"shape {self.num_rx} {self.num_tx}",
        ]
        for row in self.gains:
            lines.append("row " + " ".join(format(value, ".17g") for value in row))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "ChannelRealization":
        fields: dict[str, list[str]] = {}
        rows: list[list[float]] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, *values = line.split()
            if key == "row":
                rows.append([float(value) for value in values])
            else:
                fields[key] = values
        try:
            scheme = Scheme(fields["scheme"][0])
            K, M = (int(value) for value in fields["dims"])
            seed = int(fields.get("seed", ["0"])[0])
            n_rx, n_tx = (int(value) for value in fields["shape"])
        except (KeyError, IndexError, ValueError) as exc:
            raise InvalidDims(f"malformed channel record: {exc}") from exc
        if len(rows) != n_rx or any(len(row) != n_tx for row in rows):
            raise InvalidDims(f"channel record declares shape {n_rx}x{n_tx} but carries other rows")
        return ChannelRealization.from_matrix(scheme, K, M, rows, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        return {
            "scheme": self.scheme.value,
            "K": self.K,
            "M": self.M,
            "seed": self.seed,
            "gains": [list(row) for row in self.gains],
        }


def write_channel_file(path: str | Path, realization: ChannelRealization) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(realization.to_text(), encoding="utf-8")
    return target


def read_channel_file(path: str | Path) -> ChannelRealization:
    source = Path(path).expanduser()
    if not source.is_file():
        raise FileNotFoundError(f"channel file not found: {source}")
    return ChannelRealization.from_text(source.read_text(encoding="utf-8"))


def derived_seed(seed: int, attempt: int) -> int:
    """Seed of resampling attempt ``attempt``; attempt 0 keeps the master seed."""
    if attempt == 0:
        return int(seed)
    state = np.random.SeedSequence([int(seed), int(attempt)]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def sample_realization(
    scheme: Scheme | str,
    K: int,
    M: int,
    distribution: GainDistribution = DEFAULT_GAIN_DISTRIBUTION,
    seed: int = 0,
) -> ChannelRealization:
    """
    Draw i.i.d. gains for one scheme.

    The three-user scheme draws a generic 3-user interference channel and
    reduces it to its standard channel. The multiple-access channel fixes its
    first gain to 1; point-to-point is the unit channel.
    """
    scheme = Scheme(scheme)
    rng = np.random.default_rng(int(seed))

    if scheme == Scheme.THREE_USER:
        generic = ChannelRealization.from_matrix(
            Scheme.GIC, 3, 1, distribution.sample(rng, (3, 3)), seed=seed
        )
        return standard_channel(standard_form_3user(generic), seed=seed)
    if scheme == Scheme.P2P:
        return ChannelRealization.from_matrix(Scheme.P2P, 1, 1, [[1.0]], seed=seed)

    shape = channel_shape(scheme, K, M)
    matrix = distribution.sample(rng, shape)
    if scheme == Scheme.MAC:
        matrix[0, 0] = 1.0
    return ChannelRealization.from_matrix(scheme, K, M, matrix, seed=seed)


# ------------------------- #
#   DIRECTION EVALUATION    #
# ------------------------- #

def evaluate_direction(h: ChannelRealization, t: ExponentVector) -> float:
    """prod gain**exponent over the support of t; the unit monomial gives 1.0."""
    value = 1.0
    for rx, tx, exponent in t.terms:
        value *= h.gain(GainId(rx, tx)) ** exponent
    return value


def evaluate_directions(h: ChannelRealization, vectors: Iterable[ExponentVector]) -> np.ndarray:
    return np.array([evaluate_direction(h, vector) for vector in vectors], dtype=float)


def assert_separated(values: Sequence[float], *, rel_tol: float = SEPARATION_REL_TOL) -> None:
    """
    Raise Degenerate when two evaluated directions lie within ``rel_tol``
    relative of each other.
    """
    ordered = np.sort(np.asarray(values, dtype=float))
    if ordered.size < 2:
        return
    gaps = np.diff(ordered)
    scale = np.maximum(np.abs(ordered[:-1]), np.abs(ordered[1:]))
    close = np.nonzero(gaps <= rel_tol * scale)[0]
    if close.size:
        k = int(close[0])
        raise Degenerate(
            f"evaluated directions {ordered[k]!r} and {ordered[k + 1]!r} collide within {rel_tol} relative"
        )


# ------------------------- #
#   THREE-USER STANDARD     #
# ------------------------- #

@dataclass(frozen=True)
class StandardForm3:
    G0: float
    G1: float
    G2: float
    G3: float

    def __post_init__(self) -> None:
        for name in ("G0", "G1", "G2", "G3"):
            value = getattr(self, name)
            if not math.isfinite(value) or value == 0.0:
                raise DivisionDegenerate(f"{name} must be finite and nonzero, got {value}")

    def to_dict(self) -> dict[str, float]:
        return {"G0": self.G0, "G1": self.G1, "G2": self.G2, "G3": self.G3}


def _quotient(numerator: Sequence[float], denominator: Sequence[float], label: str) -> float:
    bottom = math.prod(denominator)
    if abs(bottom) < DIVISION_TOLERANCE:
        raise DivisionDegenerate(f"denominator of {label} underflows ({bottom!r})")
    return math.prod(numerator) / bottom


def standard_form_3user(h: ChannelRealization) -> StandardForm3:
    """
    Reduce a 3-user interference channel to its standard parameters.

    With 1-based h_jk (receiver j, transmitter k):
    G0 = h13 h21 h32 / (h12 h23 h31), G1 = h11 h12 h23 / (h12 h21 h13),
    G2 = h22 h13 / (h12 h23), G3 = h33 h12 h21 / (h12 h23 h31).
    """
    if h.scheme != Scheme.GIC or h.K != 3:
        raise InvalidDims(f"standard form needs a 3-user gic channel, got {h.scheme.value} K={h.K}")

    def g(j: int, k: int) -> float:
        return h.gains[j - 1][k - 1]

    return StandardForm3(
        G0=_quotient([g(1, 3), g(2, 1), g(3, 2)], [g(1, 2), g(2, 3), g(3, 1)], "G0"),
        G1=_quotient([g(1, 1), g(1, 2), g(2, 3)], [g(1, 2), g(2, 1), g(1, 3)], "G1"),
        G2=_quotient([g(2, 2), g(1, 3)], [g(1, 2), g(2, 3)], "G2"),
        G3=_quotient([g(3, 3), g(1, 2), g(2, 1)], [g(1, 2), g(2, 3), g(3, 1)], "G3"),
    )


def standard_channel(form: StandardForm3, *, seed: int = 0) -> ChannelRealization:
    return ChannelRealization.from_matrix(
        Scheme.THREE_USER,
        3,
        1,
        [
            [form.G1, 1.0, 1.0],
            [1.0, form.G2, 1.0],
            [1.0, form.G0, form.G3],
        ],
        seed=seed,
    )


# ------------------------- #
#     ALGEBRAIC FOLDING     #
# ------------------------- #

@dataclass(frozen=True)
class MinimalPolynomial:
    """Integer polynomial a_d G0^d + ... + a_1 G0 + a_0 = 0; coeffs are (a_0, ..., a_d)."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 2:
            raise DegreeMismatch("minimal polynomial needs degree d >= 1")
        if coeffs[-1] == 0:
            raise DegreeMismatch("leading coefficient a_d must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def evaluate(self, x: float) -> float:
        return float(sum(a * x**j for j, a in enumerate(self.coeffs)))

    def real_roots(self) -> tuple[float, ...]:
        roots = np.roots(list(reversed(self.coeffs)))
        real = sorted(float(root.real) for root in roots if abs(root.imag) <= 1e-12 * max(1.0, abs(root)))
        return tuple(real)

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @staticmethod
    def parse(text: str) -> "MinimalPolynomial":
        return MinimalPolynomial(tuple(int(part) for part in text.split(",")))


@dataclass(frozen=True)
class FoldedCombination:
    """
    Integer combination over the basis {1, G0, ..., G0^(d-1)}.

    ``scale`` is the integer a_d the observation was multiplied by.
    """

    coeffs: tuple[int, ...]
    scale: int

    def evaluate(self, g0: float) -> float:
        return float(sum(c * g0**j for j, c in enumerate(self.coeffs)))


def fold_top_power(combo: Sequence[int], p: MinimalPolynomial) -> FoldedCombination:
    """
    Fold the G0^d coefficient into the basis.

    ``combo`` is (u'_0, ..., u'_d); the output is c_j = a_d u'_j - a_j u'_d
    with the observation scaled by a_d.
    """
    if len(combo) != p.degree + 1:
        raise DegreeMismatch(f"combination of length {len(combo)} does not match degree {p.degree}")
    values = [int(u) for u in combo]
    top = values[-1]
    a_d = p.leading
    coeffs = tuple(a_d * values[j] - p.coeffs[j] * top for j in range(p.degree))
    for c in coeffs:
        if abs(c) > _INT64_MAX:
            raise IntegerOverflow(f"folded coefficient {c} exceeds the 64-bit range")
    return FoldedCombination(coeffs=coeffs, scale=a_d)


def caseI_symbol_bound(Q: int, p: MinimalPolynomial, f_in: int) -> int:
    """Enlarged fold count after folding: |a_d| f_in + max_j<d |a_j| f_in."""
    if Q < 1:
        raise InvalidSpec(f"Q must be >= 1, got {Q}")
    lower = max(abs(a) for a in p.coeffs[:-1])
    return abs(p.leading) * f_in + lower * f_in


def construct_caseI_realization(
    p: MinimalPolynomial,
    *,
    G1: float,
    G2: float,
    G3: float,
    root: Optional[float] = None,
) -> ChannelRealization:
    """
    Standard channel whose G0 is a real root of ``p``.

    Defaults to the largest nonzero real root.
    """
    if root is None:
        candidates = [value for value in p.real_roots() if value != 0.0]
        if not candidates:
            raise Degenerate(f"polynomial {p.to_text()} has no nonzero real root")
        root = max(candidates)
    if abs(p.evaluate(root)) > 1e-9 * max(1.0, max(abs(a) for a in p.coeffs) * max(1.0, abs(root)) ** p.degree):
        raise Degenerate(f"{root!r} is not a root of {p.to_text()}")
    return standard_channel(StandardForm3(G0=float(root), G1=G1, G2=G2, G3=G3))


__all__ = [
    "CHANNEL_RECORD_HEADER",
    "MAX_RESAMPLE_ATTEMPTS",
    "SEPARATION_REL_TOL",
    "DistributionKind",
    "GainDistribution",
    "DEFAULT_GAIN_DISTRIBUTION",
    "channel_shape",
    "ChannelRealization",
    "write_channel_file",
    "read_channel_file",
    "derived_seed",
    "sample_realization",
    "evaluate_direction",
    "evaluate_directions",
    "assert_separated",
    "StandardForm3",
    "standard_form_3user",
    "standard_channel",
    "MinimalPolynomial",
    "FoldedCombination",
    "fold_top_power",
    "caseI_symbol_bound",
    "construct_caseI_realization",
]
