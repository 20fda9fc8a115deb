"""
Command-line front end for RealAlign.

Subcommands:

- ``directions``: generate direction sets, compare with closed forms, check
  containment and separability (or build receiver layouts for the example
  schemes); optional text dump
- ``sweep``: Monte Carlo DOF sweep to CSV plus JSON manifest
- ``kg``: empirical Khintchine-Groshev probe to CSV
- ``standard-form``: G0..G3 of a 3-user interference channel

Configuration comes from an optional YAML file (``--config``) with flags
taking precedence. Exit codes: 0 success, 1 runtime failure, 2 usage error.
Errors print as ``error:<reason_code>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional, Sequence, TextIO

from ria import __version__
from ria.alignment import (
    check_scheme_alignment,
    gic_interference_directions,
    gic_transmit_directions,
    threeuser_caseI_directions,
    threeuser_caseII_directions,
    uplink_interference_directions,
    uplink_transmit_directions,
    x_interference_directions,
    x_transmit_directions,
)
from ria.channel import (
    ChannelRealization,
    construct_caseI_realization,
    read_channel_file,
    sample_realization,
    standard_form_3user,
)
from ria.errors import AlignmentSimError, ConfigError, InvalidDims, reason_code_of
from ria.schemas import DirectionSet, Role, Scheme
from ria.signaling import (
    RealizedPlan,
    StreamPlan,
    build_receiver_layouts,
    build_stream_plan,
    fold_receiver_layout,
    realize_plan,
    verify_layout,
)
from ria_bench.bounds import layout_dof, theoretical_dof
from ria_bench.kg import kg_probe, summarize_kg
from ria_bench.reporting import (
    build_manifest,
    kg_csv_text,
    summarize_sweep,
    sweep_csv_text,
    write_manifest,
)
from ria_bench.sweep import dof_sweep
from ria_logging.recorder import EventRecorder
from .config import RunConfig


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


# ------------------------- #
#          PARSER           #
# ------------------------- #

def _shared_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", dest="config_path", default=None, help="YAML run configuration")
    parent.add_argument("--scheme", default=None, choices=[item.value for item in Scheme])
    parent.add_argument("-K", dest="K", type=int, default=None)
    parent.add_argument("-M", dest="M", type=int, default=None)
    parent.add_argument("-n", dest="n", type=int, default=None)
    parent.add_argument("--seed", type=int, default=None)
    parent.add_argument("--gain-dist", dest="gain_dist", default=None, help="lo,hi or kind:lo,hi")
    parent.add_argument("--channel-file", dest="channel_file", default=None)
    parent.add_argument("--minimal-poly", dest="minimal_poly", default=None, help="a0,a1,...,ad (three-user Case I), e.g. --minimal-poly=-2,0,1")
    parent.add_argument("--cap", type=int, default=None, help="enumeration and constellation cap")
    parent.add_argument("--event-log", dest="event_log_path", default=None)
    return parent


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(prog="ria", description="Real interference alignment simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    directions = commands.add_parser("directions", parents=[shared], help="generate and verify direction sets")
    directions.add_argument("--dump-directions", dest="dump_directions_path", default=None)

    sweep = commands.add_parser("sweep", parents=[shared], help="Monte Carlo DOF sweep")
    sweep.add_argument("--gamma", type=float, default=None)
    sweep.add_argument("--epsilon", type=float, default=None)
    sweep.add_argument("--p-start", dest="p_start", type=float, default=None)
    sweep.add_argument("--p-stop", dest="p_stop", type=float, default=None)
    sweep.add_argument("--p-points", dest="p_points", type=int, default=None)
    sweep.add_argument("--trials", type=int, default=None)
    sweep.add_argument("--noise-std", dest="noise_std", type=float, default=None)
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--unit-padding", dest="unit_padding", action="store_const", const=True, default=None)
    sweep.add_argument("--csv", dest="csv_path", default=None)
    sweep.add_argument("--manifest", dest="manifest_path", default=None)

    kg = commands.add_parser("kg", parents=[shared], help="empirical Khintchine-Groshev probe")
    kg.add_argument("--samples", dest="kg_samples", type=int, default=None)
    kg.add_argument("--kg-m", dest="kg_m", type=int, default=None)
    kg.add_argument("--kg-n", dest="kg_n", type=int, default=None)
    kg.add_argument("--kg-epsilon", dest="kg_epsilon", type=float, default=None)
    kg.add_argument("--kg-v", dest="kg_v", default=None, help="comma-separated vector scanned after the samples")
    kg.add_argument("--csv", dest="kg_csv_path", default=None)
    kg.add_argument("--manifest", dest="manifest_path", default=None)

    commands.add_parser("standard-form", parents=[shared], help="print G0..G3 of a 3-user channel")
    return parser


_SIGNED_LIST_FLAGS = ("--minimal-poly", "--kg-v")


def attach_signed_values(argv: Sequence[str]) -> list[str]:
    """
    Join ``--minimal-poly -2,0,1`` into ``--minimal-poly=-2,0,1``.

    argparse reads a value starting with ``-`` as a new option unless it is a
    single number, which coefficient lists are not.
    """
    tokens = list(argv)
    joined: list[str] = []
    index = 0
    while index < len(tokens):
        token = tokens[index]
        following = tokens[index + 1] if index + 1 < len(tokens) else ""
        if token in _SIGNED_LIST_FLAGS and len(following) > 1 and following[0] == "-" and following[1] in "0123456789.":
            joined.append(f"{token}={following}")
            index += 2
            continue
        joined.append(token)
        index += 1
    return joined


_NON_CONFIG_ARGS = {"command", "config_path", "cap"}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    base = RunConfig.from_file(args.config_path) if args.config_path else RunConfig()
    overrides = {key: value for key, value in vars(args).items() if key not in _NON_CONFIG_ARGS}
    if args.cap is not None:
        overrides["enumeration_cap"] = args.cap
        overrides["constellation_cap"] = args.cap
    return base.with_overrides(**overrides)


def _fail(err: TextIO, exc: BaseException) -> None:
    print(f"error:{reason_code_of(exc)}: {exc}", file=err)


# ------------------------- #
#       DIRECTION SETS      #
# ------------------------- #

def _transmit_sets(plan: StreamPlan) -> dict[str, DirectionSet]:
    sets: dict[str, DirectionSet] = {}
    for tx in range(plan.num_tx):
        sets[f"tx={tx}"] = DirectionSet.build(
            (stream.direction for stream in plan.streams_of(tx)),
            scheme=plan.scheme,
            K=plan.K,
            M=plan.M,
            n=plan.n,
            role=Role.TRANSMIT,
            owners=(tx,),
        )
    return sets


def direction_sets(config: RunConfig) -> dict[str, DirectionSet]:
    """Labelled direction sets of the configured scheme, in dump order."""
    scheme, K, M, n, cap = config.scheme_enum, config.K, config.M, config.n, config.enumeration_cap
    if scheme == Scheme.GIC:
        sets = {f"tx={i}": gic_transmit_directions(K, n, i, cap=cap) for i in range(K)}
        sets["interference"] = gic_interference_directions(K, n, cap=cap)
        return sets
    if scheme == Scheme.UPLINK:
        sets = {
            f"tx={k * M + m}": uplink_transmit_directions(K, M, n, k, m, cap=cap)
            for k in range(K)
            for m in range(M)
        }
        sets["interference"] = uplink_interference_directions(K, M, n, cap=cap)
        return sets
    if scheme == Scheme.X:
        sets = {
            f"msg={r},{i}": x_transmit_directions(K, M, n, r, i, cap=cap)
            for r in range(M)
            for i in range(K)
        }
        sets.update({f"rx={r}:interference": x_interference_directions(K, M, n, r, cap=cap) for r in range(M)})
        return sets
    if scheme == Scheme.THREE_USER:
        polynomial = config.polynomial()
        triple = threeuser_caseII_directions(n) if polynomial is None else threeuser_caseI_directions(polynomial.degree)
        return {f"tx={i}": directions for i, directions in enumerate(triple)}
    return _transmit_sets(build_stream_plan(scheme, K, M, n, cap=cap))


def dump_direction_sets(sets: dict[str, DirectionSet]) -> str:
    return "".join(f"# {label}\n{directions.to_text()}" for label, directions in sets.items())


def _plan_for(config: RunConfig) -> StreamPlan:
    polynomial = config.polynomial()
    return build_stream_plan(
        config.scheme_enum,
        config.K,
        config.M,
        config.n,
        algebraic_degree=None if polynomial is None else polynomial.degree,
        cap=config.enumeration_cap,
    )


def cmd_directions(config: RunConfig, *, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    scheme = config.scheme_enum
    passed = True
    if scheme in (Scheme.GIC, Scheme.UPLINK, Scheme.X):
        summary = check_scheme_alignment(scheme, config.K, config.M, config.n, cap=config.enumeration_cap)
        for label, count in summary.counts.items():
            expected = summary.closed_forms.get(label)
            print(f"count {label} {count} closed_form={expected} match={'yes' if count == expected else 'no'}", file=out)
        print(f"contained={str(summary.all_contained).lower()}", file=out)
        print(f"separable={str(summary.all_separable).lower()}", file=out)
        for label, report in summary.alignment.items():
            if not report.contained:
                print(f"violation {label} {report.violating_directions[0].to_text()}", file=out)
        passed = summary.passed
    else:
        plan = _plan_for(config)
        polynomial = config.polynomial()
        layouts = build_receiver_layouts(plan)
        if polynomial is not None:
            layouts = tuple(fold_receiver_layout(layout, polynomial) for layout in layouts)
        contained = separable = True
        for layout in layouts:
            alignment, separability = verify_layout(plan, layout, polynomial)
            contained = contained and alignment.contained
            separable = separable and separability.separable
            print(f"rx={layout.rx} L={layout.L} L_prime={layout.L_prime} f={layout.f}", file=out)
            if not alignment.contained:
                print(f"violation rx={layout.rx} {alignment.violating_directions[0].to_text()}", file=out)
        print(f"layout_dof={layout_dof(layouts, unit_padding=config.unit_padding)}", file=out)
        print(f"contained={str(contained).lower()}", file=out)
        print(f"separable={str(separable).lower()}", file=out)
        passed = contained and separable
    print(f"theoretical_dof={theoretical_dof(scheme, config.K, config.M)}", file=out)

    if config.dump_directions_path:
        target = Path(config.dump_directions_path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(dump_direction_sets(direction_sets(config)), encoding="utf-8")
    return EXIT_OK if passed else EXIT_FAILURE


# ------------------------- #
#           SWEEP           #
# ------------------------- #

def _recorder_for(config: RunConfig) -> EventRecorder:
    if config.event_log_path:
        return EventRecorder.from_path(config.event_log_path, scheme=config.scheme)
    return EventRecorder(scheme=config.scheme)


def _fixed_channel(config: RunConfig) -> Optional[ChannelRealization]:
    if config.channel_file:
        return read_channel_file(config.channel_file)
    polynomial = config.polynomial()
    if polynomial is not None:
        G1, G2, G3 = config.caseI_gains
        return construct_caseI_realization(polynomial, G1=G1, G2=G2, G3=G3)
    return None


def realize_config(config: RunConfig, recorder: Optional[EventRecorder] = None) -> RealizedPlan:
    plan = _plan_for(config)
    fixed = _fixed_channel(config)
    realized = realize_plan(
        plan,
        config.distribution(),
        config.seed,
        h=fixed,
        minimal_polynomial=config.polynomial(),
        on_resample=None if recorder is None else recorder.record_resample,
    )
    if recorder is not None:
        recorder.record_channel(realized.h, attempts=realized.attempts, source="sampled" if fixed is None else "fixed")
        recorder.record_layouts(realized.layouts)
    return realized


def cmd_sweep(config: RunConfig, *, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    started = time.perf_counter()
    recorder = _recorder_for(config)
    recorder.record_run_started(config.to_dict(), command="sweep")

    realized = realize_config(config, recorder)
    result = dof_sweep(
        realized,
        config.p_grid(),
        trials=config.trials,
        seed=config.seed,
        gamma=config.gamma,
        epsilon=config.epsilon,
        noise_std=config.noise_std,
        workers=config.workers,
        unit_padding=config.unit_padding,
        cap=config.constellation_cap,
        recorder=recorder,
    )
    summary = summarize_sweep(result)
    text = sweep_csv_text(result.records)
    if config.csv_path:
        target = Path(config.csv_path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    else:
        out.write(text)

    wall_time = time.perf_counter() - started
    if config.manifest_path:
        manifest = build_manifest(
            command="sweep",
            config=config.to_dict(),
            seeds={"master": config.seed, "channel": realized.h.seed},
            wall_time_s=wall_time,
            run_id=recorder.run_id,
            result={**result.to_dict(), "summary": summary.to_dict(), "channel": realized.h.to_dict()},
            outputs={"csv": config.csv_path or "-"},
        )
        write_manifest(config.manifest_path, manifest)
    recorder.record_run_finished(wall_time_s=wall_time, summary=summary.to_dict())
    slope = "none" if summary.slope is None else repr(summary.slope)
    print(f"slope={slope} points={summary.points} failures={summary.failures}", file=err)
    return EXIT_OK


# ------------------------- #
#            KG             #
# ------------------------- #

def cmd_kg(config: RunConfig, *, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    started = time.perf_counter()
    recorder = _recorder_for(config)
    recorder.record_run_started(config.to_dict(), command="kg")

    rows = kg_probe(
        config.kg_samples,
        m=config.kg_m,
        epsilon=config.kg_epsilon,
        q_range=config.kg_n,
        seed=config.seed,
        distribution=config.distribution(),
        injected=config.kg_v,
        cap=config.enumeration_cap,
        recorder=recorder,
    )
    summary = summarize_kg(rows)
    text = kg_csv_text(rows)
    if config.kg_csv_path:
        target = Path(config.kg_csv_path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    else:
        out.write(text)

    wall_time = time.perf_counter() - started
    if config.manifest_path:
        manifest = build_manifest(
            command="kg",
            config=config.to_dict(),
            seeds={"master": config.seed},
            wall_time_s=wall_time,
            run_id=recorder.run_id,
            result={"summary": summary.to_dict(), "rows": [row.to_dict() for row in rows]},
            outputs={"csv": config.kg_csv_path or "-"},
        )
        write_manifest(config.manifest_path, manifest)
    recorder.record_run_finished(wall_time_s=wall_time, summary=summary.to_dict())
    print(
        f"samples={summary.samples} zero_hits={summary.zero_hits} failures={summary.failures} "
        f"q10={summary.q10!r} q50={summary.q50!r} q90={summary.q90!r}",
        file=err,
    )
    return EXIT_OK


# ------------------------- #
#       STANDARD FORM       #
# ------------------------- #

def cmd_standard_form(config: RunConfig, *, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    if config.channel_file:
        h = read_channel_file(config.channel_file)
    else:
        h = sample_realization(Scheme.GIC, 3, 1, config.distribution(), config.seed)
    form = standard_form_3user(h)
    for name, value in form.to_dict().items():
        print(f"{name} {value!r}", file=out)
    return EXIT_OK


_COMMANDS = {
    "directions": cmd_directions,
    "sweep": cmd_sweep,
    "kg": cmd_kg,
    "standard-form": cmd_standard_form,
}


def main(argv: Optional[Sequence[str]] = None, *, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(attach_signed_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        config = resolve_config(args)
    except (ConfigError, InvalidDims) as exc:
        _fail(err, exc)
        return EXIT_USAGE

    try:
        return _COMMANDS[args.command](config, out=out, err=err)
    except (AlignmentSimError, FileNotFoundError) as exc:
        _fail(err, exc)
        return EXIT_FAILURE


__all__ = [
    "EXIT_OK",
    "EXIT_FAILURE",
    "EXIT_USAGE",
    "build_parser",
    "attach_signed_values",
    "resolve_config",
    "direction_sets",
    "dump_direction_sets",
    "realize_config",
    "cmd_directions",
    "cmd_sweep",
    "cmd_kg",
    "cmd_standard_form",
    "main",
]
