"""
RealAlign canonical value types.

This module defines the small immutable types shared by every layer:

- ``GainId``: the (receiver, transmitter) subscript of one channel gain
- ``ExponentVector``: a monomial over base channel gains, the atom of a
  transmit or receive direction
- ``DirectionSet``: a canonically ordered, duplicate-free set of monomials plus
  the scheme metadata it was generated for
- ``AlignmentReport`` / ``SeparabilityReport``: verdicts of the symbolic checks

Canonical ordering is lexicographic on the flattened ``(rx, tx, exponent)``
terms, so set equality, text dumps and stream numbering are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, Optional


# ------------------------- #
#        ENUMERATIONS       #
# ------------------------- #

class Scheme(str, Enum):
    GIC = "gic"
    UPLINK = "uplink"
    X = "x"
    THREE_USER = "three-user"
    MAC = "mac"
    TWO_USER_X = "two-user-x"
    P2P = "p2p"


class Role(str, Enum):
    TRANSMIT = "transmit"
    INTERFERENCE = "interference"
    INTENDED = "intended"
    RECEIVED = "received"


# ------------------------- #
#        MONOMIALS          #
# ------------------------- #

@dataclass(frozen=True, order=True)
class GainId:
    """Subscript pair of h_{rx,tx}; uplink transmitters are flattened as cell*M + user."""

    rx: int
    tx: int

    def __post_init__(self) -> None:
        if self.rx < 0 or self.tx < 0:
            raise ValueError(f"gain indices must be nonnegative: ({self.rx},{self.tx})")

    def to_token(self) -> str:
        return f"{self.rx},{self.tx}"

    @staticmethod
    def from_token(text: str) -> "GainId":
        rx_text, tx_text = text.split(",")
        return GainId(int(rx_text), int(tx_text))


Term = tuple[int, int, int]


@dataclass(frozen=True, order=True)
class ExponentVector:
    """
    Monomial prod h_{rx,tx}^e over base gains.

    ``terms`` holds ``(rx, tx, e)`` triples sorted by ``(rx, tx)`` with e > 0.
    Absent gains have exponent 0, so the empty tuple is the monomial 1.
    """

    terms: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        previous: Optional[tuple[int, int]] = None
        for rx, tx, exponent in self.terms:
            if rx < 0 or tx < 0:
                raise ValueError(f"gain indices must be nonnegative: ({rx},{tx})")
            if exponent <= 0:
                raise ValueError(f"stored exponents must be positive, got {exponent} for ({rx},{tx})")
            if previous is not None and (rx, tx) <= previous:
                raise ValueError("terms must be strictly sorted by (rx, tx)")
            previous = (rx, tx)

    @staticmethod
    def trusted(terms: tuple[Term, ...]) -> "ExponentVector":
        """Build from terms already sorted with positive exponents, skipping validation."""
        vector = object.__new__(ExponentVector)
        object.__setattr__(vector, "terms", terms)
        return vector

    @staticmethod
    def unit() -> "ExponentVector":
        return _UNIT

    @staticmethod
    def of(gain: GainId, exponent: int = 1) -> "ExponentVector":
        if exponent < 0:
            raise ValueError("exponents must be nonnegative")
        if exponent == 0:
            return _UNIT
        return ExponentVector(((gain.rx, gain.tx, int(exponent)),))

    @staticmethod
    def from_mapping(exponents: Mapping[GainId, int]) -> "ExponentVector":
        for gain, exponent in exponents.items():
            if exponent < 0:
                raise ValueError(f"negative exponent {exponent} for {gain.to_token()}")
        terms = tuple(
            (gain.rx, gain.tx, int(exponent))
            for gain, exponent in sorted(exponents.items())
            if exponent
        )
        return ExponentVector(terms)

    @property
    def is_unit(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return sum(term[2] for term in self.terms)

    def exponent(self, gain: GainId) -> int:
        for rx, tx, exponent in self.terms:
            if (rx, tx) == (gain.rx, gain.tx):
                return exponent
        return 0

    def gains(self) -> tuple[GainId, ...]:
        return tuple(GainId(rx, tx) for rx, tx, _ in self.terms)

    def as_mapping(self) -> dict[GainId, int]:
        return {GainId(rx, tx): exponent for rx, tx, exponent in self.terms}

    def shift(self, gain: GainId, by: int = 1) -> "ExponentVector":
        """Multiply by gain**by."""
        return self.multiply(ExponentVector.of(gain, by))

    def multiply(self, other: "ExponentVector") -> "ExponentVector":
        """Exponent addition."""
        if not other.terms:
            return self
        if not self.terms:
            return other
        merged: dict[tuple[int, int], int] = {}
        for rx, tx, exponent in self.terms + other.terms:
            merged[(rx, tx)] = merged.get((rx, tx), 0) + exponent
        return ExponentVector.trusted(tuple((rx, tx, e) for (rx, tx), e in sorted(merged.items())))

    def power_of(self, gain: GainId) -> Optional[int]:
        """Return k when this monomial is exactly gain**k, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and self.terms[0][:2] == (gain.rx, gain.tx):
            return self.terms[0][2]
        return None

    def to_text(self) -> str:
        if not self.terms:
            return "1"
        return " ".join(f"{rx},{tx}^{exponent}" for rx, tx, exponent in self.terms)

    @staticmethod
    def from_text(text: str) -> "ExponentVector":
        text = text.strip()
        if text in ("", "1"):
            return _UNIT
        exponents: dict[GainId, int] = {}
        for token in text.split():
            base, _, power = token.partition("^")
            gain = GainId.from_token(base)
            if gain in exponents:
                raise ValueError(f"duplicate gain in monomial: {token}")
            exponents[gain] = int(power) if power else 1
        return ExponentVector.from_mapping(exponents)

    def __mul__(self, other: "ExponentVector") -> "ExponentVector":
        return self.multiply(other)


_UNIT = ExponentVector(())


# ------------------------- #
#      DIRECTION SETS       #
# ------------------------- #

@dataclass(frozen=True)
class DirectionSet:
    """
    Canonically sorted, duplicate-free set of monomials.

    ``owners`` lists the transmitter (or receiver) indices the set belongs to;
    its meaning depends on ``role``.
    """

    directions: tuple[ExponentVector, ...]
    scheme: Optional[Scheme]
    K: int
    M: int
    n: int
    role: Role
    owners: tuple[int, ...] = ()
    _members: frozenset[ExponentVector] = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ordered = self.directions
        for left, right in zip(ordered, ordered[1:]):
            if not left < right:
                raise ValueError("direction set must be strictly sorted without duplicates")
        object.__setattr__(self, "_members", frozenset(ordered))

    @staticmethod
    def build(
        vectors: Iterable[ExponentVector],
        *,
        scheme: Optional[Scheme],
        K: int,
        M: int,
        n: int,
        role: Role,
        owners: Iterable[int] = (),
    ) -> "DirectionSet":
        """Sort and deduplicate ``vectors`` into a DirectionSet."""
        return DirectionSet(
            directions=tuple(sorted(set(vectors))),
            scheme=None if scheme is None else Scheme(scheme),
            K=int(K),
            M=int(M),
            n=int(n),
            role=Role(role),
            owners=tuple(int(owner) for owner in owners),
        )

    def __len__(self) -> int:
        return len(self.directions)

    def __iter__(self) -> Iterator[ExponentVector]:
        return iter(self.directions)

    def __contains__(self, item: object) -> bool:
        return item in self._members

    def members(self) -> frozenset[ExponentVector]:
        return self._members

    def with_directions(
        self,
        vectors: Iterable[ExponentVector],
        *,
        role: Optional[Role] = None,
    ) -> "DirectionSet":
        return DirectionSet.build(
            vectors,
            scheme=self.scheme,
            K=self.K,
            M=self.M,
            n=self.n,
            role=self.role if role is None else role,
            owners=self.owners,
        )

    def union(self, other: "DirectionSet") -> "DirectionSet":
        owners = tuple(sorted(set(self.owners) | set(other.owners)))
        return DirectionSet.build(
            self._members | other.members(),
            scheme=self.scheme,
            K=self.K,
            M=self.M,
            n=self.n,
            role=self.role,
            owners=owners,
        )

    def to_text(self) -> str:
        """One monomial per line as space-separated ``rx,tx^e`` tokens."""
        return "".join(vector.to_text() + "\n" for vector in self.directions)

    @staticmethod
    def from_text(
        text: str,
        *,
        scheme: Optional[Scheme],
        K: int,
        M: int,
        n: int,
        role: Role,
        owners: Iterable[int] = (),
    ) -> "DirectionSet":
        vectors = [
            ExponentVector.from_text(line)
            for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")
        ]
        return DirectionSet.build(vectors, scheme=scheme, K=K, M=M, n=n, role=role, owners=owners)

    def to_dict(self) -> dict[str, Any]:
        return {
            "scheme": None if self.scheme is None else self.scheme.value,
            "K": self.K,
            "M": self.M,
            "n": self.n,
            "role": self.role.value,
            "owners": list(self.owners),
            "count": len(self.directions),
        }


# ------------------------- #
#         VERDICTS          #
# ------------------------- #

@dataclass(frozen=True)
class AlignmentReport:
    contained: bool
    violating_directions: tuple[ExponentVector, ...]
    transmit_count: int
    received_count: int
    efficiency: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {
            "contained": bool(self.contained),
            "violating_directions": [vector.to_text() for vector in self.violating_directions],
            "transmit_count": int(self.transmit_count),
            "received_count": int(self.received_count),
            "efficiency": str(self.efficiency),
        }


@dataclass(frozen=True)
class SeparabilityReport:
    separable: bool
    collisions: tuple[ExponentVector, ...]

    def __bool__(self) -> bool:
        return self.separable

    def to_dict(self) -> dict[str, Any]:
        return {
            "separable": bool(self.separable),
            "collisions": [vector.to_text() for vector in self.collisions],
        }


__all__ = [
    "Scheme",
    "Role",
    "GainId",
    "Term",
    "ExponentVector",
    "DirectionSet",
    "AlignmentReport",
    "SeparabilityReport",
]
