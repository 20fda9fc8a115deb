"""
RealAlign: Tests for run configuration loading and validation.

These tests validate RunConfig against the repository's real YAML files and a
few targeted invalid-config cases.
"""

import os
import sys
from pathlib import Path
from tempfile import TemporaryDirectory

# Make project packages importable without packaging/install
sys.path.insert(0, os.path.abspath("src"))

import yaml  # noqa: E402

from ria.errors import ConfigError, InvalidDims  # noqa: E402
from ria.schemas import Scheme  # noqa: E402
from ria_runtime.config import EXAMPLES_DIR, RunConfig  # noqa: E402


def repo_root() -> Path:
    return Path(__file__).resolve().parents[1]


def test_defaults_file_mirrors_dataclass_defaults():
    assert RunConfig.from_repo_root(repo_root()) == RunConfig()


def test_every_example_config_loads():
    names = sorted(path.stem for path in (repo_root() / EXAMPLES_DIR).glob("*.yaml"))

    assert "two_user_x" in names
    for name in names:
        config = RunConfig.from_repo_root(repo_root(), name)
        assert config.scheme_enum in set(Scheme)


def test_example_values_are_coerced():
    case1 = RunConfig.from_repo_root(repo_root(), "three_user_case1")
    kg = RunConfig.from_repo_root(repo_root(), "kg")
    x = RunConfig.from_repo_root(repo_root(), "x_2x2")

    assert case1.scheme_enum == Scheme.THREE_USER
    assert case1.polynomial().degree == 2
    assert case1.caseI_gains == (1.3, 0.7, 1.9)
    assert kg.kg_v == (1.4142135623730951, 1.7320508075688772)
    assert kg.kg_n == 40
    assert (x.K, x.M, x.n) == (2, 2, 1)
    assert len(x.p_grid()) == 9


def test_unknown_keys_are_rejected():
    try:
        RunConfig.from_mapping({"scheme": "p2p", "snr": 10})
        raised = False
    except ConfigError:
        raised = True

    assert raised is True


def test_dimensions_are_checked_per_scheme():
    try:
        RunConfig(scheme="x", K=2, M=1).validate()
        raised = False
    except InvalidDims:
        raised = True

    assert raised is True
    RunConfig(scheme="mac", K=1, M=1).validate()


def test_overrides_skip_none_and_revalidate():
    base = RunConfig(scheme="gic", K=3)

    same = base.with_overrides(K=None, seed=None)
    changed = base.with_overrides(n=2, p_start="1e4", workers="2")

    assert same == base
    assert changed.n == 2
    assert changed.p_start == 1.0e4
    assert changed.workers == 2

    try:
        base.with_overrides(gamma=0.0)
        raised = False
    except ConfigError:
        raised = True
    assert raised is True


def test_minimal_polynomial_needs_the_three_user_scheme():
    for data in (
        {"scheme": "gic", "minimal_poly": "-2,0,1"},
        {"scheme": "three-user", "minimal_poly": "-2,0,1", "channel_file": "h.txt"},
        {"scheme": "three-user", "minimal_poly": "x^2-2"},
        {"gain_dist": "gaussian:0,1"},
        {"trials": 1.5},
    ):
        try:
            RunConfig.from_mapping(data)
            raised = False
        except ConfigError:
            raised = True
        assert raised is True


def test_config_file_must_be_a_mapping():
    with TemporaryDirectory() as tmpdir:
        listing = Path(tmpdir) / "list.yaml"
        listing.write_text(yaml.safe_dump([1, 2, 3]), encoding="utf-8")
        valid = Path(tmpdir) / "run.yaml"
        valid.write_text(yaml.safe_dump({"scheme": "mac", "K": 3, "kg_v": "0.5,0.25"}), encoding="utf-8")

        try:
            RunConfig.from_file(listing)
            raised = False
        except ConfigError:
            raised = True
        loaded = RunConfig.from_file(valid)

    assert raised is True
    assert loaded.K == 3
    assert loaded.kg_v == (0.5, 0.25)
    assert loaded.to_dict()["kg_v"] == [0.5, 0.25]


def test_missing_config_file_is_a_config_error():
    try:
        RunConfig.from_file(repo_root() / "configs" / "does_not_exist.yaml")
        raised = False
    except ConfigError:
        raised = True

    assert raised is True
