"""
Run configuration for RealAlign.

This module loads flat YAML run files into a validated ``RunConfig``:

- dataclass defaults are the single source of default values;
  ``configs/defaults.yaml`` mirrors them for reference and diffing
- files may set any subset of keys; unknown keys are rejected
- CLI flags override file values through ``with_overrides`` (flags win)

Validation is targeted rather than a schema system: per-scheme minimal
dimensions, a strictly increasing geometric power grid, positive trial
counts and parseable distribution / polynomial strings.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from ria.channel import GainDistribution, MinimalPolynomial
from ria.errors import AlignmentSimError, ConfigError, InvalidDims
from ria.schemas import Scheme
from ria_bench.sweep import geometric_grid


DEFAULTS_FILE = Path("configs") / "defaults.yaml"
EXAMPLES_DIR = Path("configs") / "examples"


@dataclass(frozen=True)
class RunConfig:
    scheme: str = "p2p"
    K: int = 2
    M: int = 1
    n: int = 1

    gamma: float = 1.0
    epsilon: float = 0.05
    p_start: float = 1.0e4
    p_stop: float = 1.0e12
    p_points: int = 9
    trials: int = 1000
    seed: int = 0
    noise_std: float = 1.0
    unit_padding: bool = False
    workers: int = 1

    gain_dist: str = "uniform:0.5,2"
    channel_file: Optional[str] = None
    minimal_poly: Optional[str] = None
    caseI_gains: tuple[float, float, float] = (1.3, 0.7, 1.9)

    enumeration_cap: int = 10**7
    constellation_cap: int = 10**7

    csv_path: Optional[str] = None
    manifest_path: Optional[str] = None
    event_log_path: Optional[str] = None
    dump_directions_path: Optional[str] = None

    kg_samples: int = 100
    kg_m: int = 2
    kg_n: int = 50
    kg_epsilon: float = 0.1
    kg_v: Optional[tuple[float, ...]] = None
    kg_csv_path: Optional[str] = None

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RunConfig":
        known = {item.name for item in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        values = {key: _coerce(key, value) for key, value in data.items()}
        config = cls(**values)
        config.validate()
        return config

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        source = Path(path).expanduser().resolve()
        if not source.is_file():
            raise ConfigError(f"config file not found: {source}")
        return cls.from_mapping(_load_yaml_file(source))

    @classmethod
    def from_repo_root(cls, repo_root: str | Path, example: Optional[str] = None) -> "RunConfig":
        """Load ``configs/defaults.yaml``, or ``configs/examples/<example>.yaml`` layered on it."""
        root = Path(repo_root).expanduser().resolve()
        data = _load_yaml_file(root / DEFAULTS_FILE)
        if example is not None:
            data.update(_load_yaml_file(root / EXAMPLES_DIR / f"{example}.yaml"))
        return cls.from_mapping(data)

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Replace every key whose override is not None, then validate."""
        known = {item.name for item in fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        changes = {key: _coerce(key, value) for key, value in overrides.items() if value is not None}
        config = replace(self, **changes)
        config.validate()
        return config

    @property
    def scheme_enum(self) -> Scheme:
        return Scheme(self.scheme)

    def distribution(self) -> GainDistribution:
        return GainDistribution.parse(self.gain_dist)

    def polynomial(self) -> Optional[MinimalPolynomial]:
        return None if self.minimal_poly is None else MinimalPolynomial.parse(self.minimal_poly)

    def p_grid(self) -> tuple[float, ...]:
        return geometric_grid(self.p_start, self.p_stop, self.p_points)

    def validate(self) -> None:
        try:
            scheme = Scheme(self.scheme)
        except ValueError as exc:
            choices = ", ".join(item.value for item in Scheme)
            raise ConfigError(f"unknown scheme '{self.scheme}'; choose one of: {choices}") from exc

        minimal_dims = {
            Scheme.GIC: (2, 1),
            Scheme.UPLINK: (2, 1),
            Scheme.X: (2, 2),
            Scheme.MAC: (1, 1),
        }
        min_K, min_M = minimal_dims.get(scheme, (1, 1))
        if self.K < min_K or self.M < min_M:
            raise InvalidDims(f"{scheme.value} needs K >= {min_K} and M >= {min_M}, got K={self.K}, M={self.M}")
        if self.n < 1:
            raise InvalidDims(f"n must be >= 1, got n={self.n}")

        _require(self.gamma > 0, f"gamma must be > 0, got {self.gamma}")
        _require(self.epsilon >= 0, f"epsilon must be >= 0, got {self.epsilon}")
        _require(
            0 < self.p_start < self.p_stop and self.p_points >= 2,
            f"P grid needs 0 < p_start < p_stop and p_points >= 2, got {self.p_start}, {self.p_stop}, {self.p_points}",
        )
        _require(self.trials >= 1, f"trials must be >= 1, got {self.trials}")
        _require(self.noise_std >= 0, f"noise_std must be >= 0, got {self.noise_std}")
        _require(self.workers >= 1, f"workers must be >= 1, got {self.workers}")
        _require(
            self.enumeration_cap >= 1 and self.constellation_cap >= 1,
            "enumeration caps must be >= 1",
        )
        _require(
            self.kg_samples >= 0 and self.kg_m >= 1 and self.kg_n >= 1 and self.kg_epsilon >= 0,
            "kg settings need samples >= 0, m >= 1, n >= 1 and epsilon >= 0",
        )
        _require(len(self.caseI_gains) == 3, "caseI_gains needs exactly three values (G1, G2, G3)")

        try:
            self.distribution()
            polynomial = self.polynomial()
        except (AlignmentSimError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        if polynomial is not None and scheme != Scheme.THREE_USER:
            raise ConfigError("minimal_poly is only meaningful for the three-user scheme")
        if polynomial is not None and self.channel_file is not None:
            raise ConfigError("minimal_poly constructs its own channel; drop channel_file")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["caseI_gains"] = list(self.caseI_gains)
        data["kg_v"] = None if self.kg_v is None else list(self.kg_v)
        return data


_INT_KEYS = {"K", "M", "n", "p_points", "trials", "seed", "workers", "enumeration_cap", "constellation_cap",
             "kg_samples", "kg_m", "kg_n"}
_FLOAT_KEYS = {"gamma", "epsilon", "p_start", "p_stop", "noise_std", "kg_epsilon"}
_PATH_KEYS = {"channel_file", "minimal_poly", "csv_path", "manifest_path", "event_log_path",
              "dump_directions_path", "kg_csv_path"}


def _float_tuple(key: str, value: Any) -> tuple[float, ...]:
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{key} must be a list or a comma-separated string")
    return tuple(float(part) for part in value)


def _coerce(key: str, value: Any) -> Any:
    try:
        if key in _INT_KEYS:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError(f"expected an integer, got {value!r}")
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key == "unit_padding":
            if not isinstance(value, bool):
                raise ValueError(f"expected true or false, got {value!r}")
            return value
        if key == "scheme":
            return str(value)
        if key == "gain_dist":
            return str(value)
        if key in _PATH_KEYS:
            return None if value is None else str(value)
        if key == "caseI_gains":
            return _float_tuple(key, value)
        if key == "kg_v":
            return None if value is None else _float_tuple(key, value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for {key}: {exc}") from exc
    return value


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _load_yaml_file(path: Path) -> dict[str, Any]:
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    with path.open("r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"top-level YAML content must be a mapping: {path}")
    return data


__all__ = [
    "DEFAULTS_FILE",
    "EXAMPLES_DIR",
    "RunConfig",
]
