"""Command-line interface: verify transfers, emit tables, schedules, tracks.

Exit codes follow the usual contract: 0 on success, 1 when a verified
property fails (transfer below tolerance, infeasible schedule), 2 for invalid
input (bad flags, malformed chain or pulse-program files).  Data goes to
stdout, diagnostics to stderr, and identical invocations produce identical
bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, plotting
from .chain import ChainSpec
from .dense import OracleLimitError, backend_agreement, oracle_limit
from .pauli import AXES, format_number, ladder_minus, spin_op
from .scheduler import (
    ScheduleError,
    build_echo_schedule,
    build_soliton_unequal,
    ideal_interval_events,
    schedule_report,
    soliton_budgets,
)
from .sequences import (
    BUILDER_NAMES,
    TIMING_ONLY_NAMES,
    NamedSequence,
    ParseError,
    build_named,
    format_sequence,
    parse_sequence,
)

DEFAULTS = {
    "tol": analysis.OVERLAP_TOLERANCE,
    "backend": "heisenberg",
    "format": "text",
    "oracle_max_spins": None,  # falls back to env / built-in cap
}


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    unknown = set(config) - set(DEFAULTS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return config


def _setting(args, config: dict, key: str):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return DEFAULTS[key]


def _resolve_chain(args) -> ChainSpec:
    if getattr(args, "chain", None):
        if getattr(args, "n", None) or getattr(args, "J", None):
            raise ValueError("give either --chain or --n/--J, not both")
        with open(args.chain, "r", encoding="utf-8") as fh:
            return ChainSpec.from_json(fh.read())
    n = getattr(args, "n", None)
    if n is None:
        raise ValueError("no chain given; use --chain FILE or --n N [--J HZ]")
    return ChainSpec.uniform(n, getattr(args, "J", None) or 1.0)


def _resolve_sequence(args, chain: ChainSpec):
    """Builder or pulse-program file -> (NamedSequence | PulseSequence)."""
    builder = getattr(args, "builder", None)
    seq_file = getattr(args, "seq", None)
    if builder and seq_file:
        raise ValueError("give either --builder or --seq, not both")
    if builder:
        if builder in TIMING_ONLY_NAMES:
            raise ValueError(
                f"{builder!r} is a timing-only strategy without an in-scope "
                "pulse sequence; it appears in 'table' output only"
            )
        if builder not in BUILDER_NAMES:
            raise ValueError(
                f"unknown builder {builder!r}; expected one of "
                f"{BUILDER_NAMES + TIMING_ONLY_NAMES}"
            )
        if chain.is_uniform():
            return build_named(builder, chain.n, chain.couplings[0])
        if builder == "soliton":
            return build_soliton_unequal(chain)
        raise ValueError(f"builder {builder!r} requires equal couplings")
    if seq_file:
        with open(seq_file, "r", encoding="utf-8") as fh:
            return parse_sequence(fh.read(), name=seq_file)
    raise ValueError("no sequence given; use --builder NAME or --seq FILE")


# -- verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    config = _load_config(args.config)
    chain = _resolve_chain(args)
    seq = _resolve_sequence(args, chain)
    backend = _setting(args, config, "backend")
    tol = float(_setting(args, config, "tol"))
    fmt = _setting(args, config, "format")
    max_spins = _setting(args, config, "oracle_max_spins")
    source = args.source or 1
    target = args.target or chain.n

    report = analysis.transfer_report(
        seq, chain, source, target, backend=backend, max_spins=max_spins
    )
    components = AXES if args.component in (None, "all") else (args.component,)
    ok = report.success(tol, components)
    if report.backend_residual is not None and report.backend_residual > tol:
        ok = False

    if fmt == "json":
        payload = report.to_dict()
        payload["components_checked"] = list(components)
        payload["tolerance"] = tol
        payload["success"] = ok
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif fmt == "csv":
        cols = ["source", "target", "duration_s", "overlap_x", "overlap_y",
                "overlap_z", "success"]
        mags = report.magnitudes()
        row = [str(source), str(target), format_number(report.duration),
               format_number(mags["x"]), format_number(mags["y"]),
               format_number(mags["z"]), str(int(ok))]
        print(",".join(cols))
        print(",".join(row))
    else:
        name = seq.sequence.name if isinstance(seq, NamedSequence) else seq.name
        print(f"sequence: {name}")
        print(f"transfer: spin {source} -> spin {target}")
        print(f"duration_s: {format_number(report.duration)}")
        for axis in AXES:
            v = report.component_overlaps[axis]
            print(f"overlap_{axis}: {format_number(v.real)}"
                  f"{'+' if v.imag >= 0 else '-'}{format_number(abs(v.imag))}j"
                  f"  |.| = {format_number(abs(v))}")
        if report.backend_residual is not None:
            print(f"backend_residual: {format_number(report.backend_residual)}")
        print(f"components_checked: {','.join(components)}")
        print(f"result: {'PASS' if ok else 'FAIL'} (tolerance {format_number(tol)})")
    return 0 if ok else 1


# -- table ----------------------------------------------------------------------


def cmd_table(args) -> int:
    J = args.J or 1.0
    rows = analysis.timing_table(args.n_max, J)
    print(",".join(analysis.TIMING_CSV_COLUMNS))
    for row in rows:
        values = row.to_csv_row()
        print(",".join([str(values[0])] + [format_number(v) for v in values[1:]]))
    if args.plot:
        plotting.plot_timing_table(rows, args.plot)
        _err(f"wrote figure {args.plot}")
    return 0


# -- schedule -------------------------------------------------------------------


def cmd_schedule(args) -> int:
    config = _load_config(args.config)
    chain = _resolve_chain(args)
    max_spins = _setting(args, config, "oracle_max_spins")
    report = schedule_report(chain)
    if args.check:
        from .dense import dense_propagator, phase_aligned_residual
        from .events import PulseSequence
        from .scheduler import schedule_events

        limit = oracle_limit(max_spins)
        if chain.n > limit:
            raise OracleLimitError(
                f"--check needs the dense oracle (limit {limit} spins)")
        worst = 0.0
        for budget, segment in zip(soliton_budgets(chain), report["segments"]):
            schedule = build_echo_schedule(budget, chain)
            physical = PulseSequence(chain.n, tuple(schedule_events(schedule)))
            ideal = PulseSequence(chain.n, tuple(ideal_interval_events(budget)))
            residual = phase_aligned_residual(
                dense_propagator(physical, chain, max_spins=max_spins),
                dense_propagator(ideal, chain, max_spins=max_spins),
            )
            segment["oracle_residual"] = residual
            worst = max(worst, residual)
        seq = build_soliton_unequal(chain)
        end_to_end = max(
            backend_agreement(seq.sequence, chain,
                              spin_op(1, axis, chain.n).to_sum(),
                              max_spins=max_spins)
            for axis in AXES
        )
        report["check"] = {
            "worst_interval_residual": worst,
            "end_to_end_backend_residual": end_to_end,
        }
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


# -- track ----------------------------------------------------------------------


def cmd_track(args) -> int:
    config = _load_config(args.config)
    chain = _resolve_chain(args)
    seq = _resolve_sequence(args, chain)
    fmt = _setting(args, config, "format")
    if not isinstance(seq, NamedSequence):
        from fractions import Fraction

        blocks = tuple((f"event-{i + 1}", 1) for i in range(len(seq.events)))
        seq = NamedSequence("file", chain.n, 0.0, seq,
                            Fraction(seq.total_duration), blocks)
    source = args.source or 1
    if args.component in (None, "minus"):
        start = ladder_minus(source, chain.n)
    else:
        start = spin_op(source, args.component, chain.n).to_sum()
    snapshots = analysis.stroboscopic_track(seq, chain, start)
    if fmt == "json":
        print(json.dumps([s.to_dict() for s in snapshots], indent=2, sort_keys=True))
    else:
        width = max(len(s.label) for s in snapshots)
        for snap in snapshots:
            print(f"t={format_number(snap.time):>14}  {snap.label:<{width}}  "
                  f"{snap.operator}")
    if args.plot:
        plotting.plot_track(snapshots, chain.n, args.plot)
        _err(f"wrote figure {args.plot}")
    return 0


# -- parse (lint) ---------------------------------------------------------------


def cmd_parse(args) -> int:
    if not args.seq:
        raise ValueError("no pulse program given; use --seq FILE")
    with open(args.seq, "r", encoding="utf-8") as fh:
        seq = parse_sequence(fh.read(), name=args.seq)
    sys.stdout.write(format_sequence(seq))
    _err(f"{args.seq}: {len(seq.events)} events, "
         f"{seq.n if seq.n else 'unspecified'} spins, "
         f"duration {format_number(seq.total_duration)} s")
    return 0


# -- exchange -------------------------------------------------------------------


def cmd_exchange(args) -> int:
    config = _load_config(args.config)
    chain = _resolve_chain(args)
    max_spins = _setting(args, config, "oracle_max_spins")
    report = analysis.exchange_experiment(chain, max_spins=max_spins)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


# -- parser wiring ---------------------------------------------------------------


def _add_common(sub, chain=True, sequence=False) -> None:
    sub.add_argument("--config", help="JSON config file (flags take precedence)")
    sub.add_argument("--oracle-max-spins", dest="oracle_max_spins", type=int,
                     help="dense-oracle spin cap (env SPINCHAIN_ORACLE_MAX)")
    if chain:
        sub.add_argument("--chain", help="chain spec JSON file")
        sub.add_argument("--n", type=int, help="spin count (uniform chain)")
        sub.add_argument("--J", type=float, help="coupling in Hz (default 1)")
    if sequence:
        sub.add_argument("--builder",
                         help=f"one of {', '.join(BUILDER_NAMES + TIMING_ONLY_NAMES)}")
        sub.add_argument("--seq", help="pulse-program file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinchain",
        description="Simulate and verify coherence transfer through Ising spin chains.",
    )
    subs = parser.add_subparsers(dest="command")

    verify = subs.add_parser("verify", help="check a transfer against tolerance")
    _add_common(verify, sequence=True)
    verify.add_argument("--source", type=int, help="source spin (default 1)")
    verify.add_argument("--target", type=int, help="target spin (default n)")
    verify.add_argument("--component", choices=("x", "y", "z", "all"),
                        help="component(s) that must transfer (default all)")
    verify.add_argument("--backend", choices=("heisenberg", "dense", "both"))
    verify.add_argument("--tol", type=float, help="overlap tolerance")
    verify.add_argument("--format", choices=("text", "json", "csv"))
    verify.set_defaults(func=cmd_verify)

    table = subs.add_parser("table", help="emit the strategy timing table as CSV")
    table.add_argument("--n-max", dest="n_max", type=int, required=True)
    table.add_argument("--J", type=float, help="coupling in Hz (default 1)")
    table.add_argument("--plot", help="also render the comparison figure to FILE")
    table.set_defaults(func=cmd_table)

    schedule = subs.add_parser(
        "schedule", help="echo schedule and timing breakdown for a chain")
    _add_common(schedule)
    schedule.add_argument("--check", action="store_true",
                          help="validate the schedule against the dense oracle")
    schedule.set_defaults(func=cmd_schedule)

    track = subs.add_parser("track", help="stroboscopic operator snapshots")
    _add_common(track, sequence=True)
    track.add_argument("--source", type=int, help="starting spin (default 1)")
    track.add_argument("--component", choices=("x", "y", "z", "minus"),
                       help="starting operator component (default minus)")
    track.add_argument("--format", choices=("text", "json"))
    track.add_argument("--plot", help="also render the flow figure to FILE")
    track.set_defaults(func=cmd_track)

    lint = subs.add_parser("parse", help="lint a pulse-program file")
    lint.add_argument("--seq", required=True, help="pulse-program file")
    lint.set_defaults(func=cmd_parse)

    exchange = subs.add_parser(
        "exchange", help="bidirectional end-exchange experiment report")
    _add_common(exchange)
    exchange.set_defaults(func=cmd_exchange)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help(file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ParseError as exc:
        _err(f"parse error: {exc}")
        return 2
    except ScheduleError as exc:
        _err(f"schedule error: {exc}")
        return 1
    except OracleLimitError as exc:
        _err(str(exc))
        return 2
    except (ValueError, IndexError, OSError) as exc:
        _err(str(exc))
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
