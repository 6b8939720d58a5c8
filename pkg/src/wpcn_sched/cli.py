"""Command-line front end.

Subcommands: ``gen`` writes a seeded instance file, ``schedule`` runs one
algorithm on an instance, ``validate`` checks a schedule file against its
instance, ``sweep`` runs the configured parameter sweep and emits CSV.
Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 infeasible instance.
"""

import argparse
import sys as _sys

from .netgen import generate, read_instance, write_instance
from .power import InfeasibleUser, NumericalError
from .schedulers import SizeCapExceeded
from .sweep import (
    ALGORITHMS,
    Config,
    ConfigError,
    SweepSpec,
    load_config,
    read_schedule,
    run_algorithm,
    run_sweep,
    emit_csv,
    validate_schedule,
    write_schedule,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wpcn-sched",
        description="Minimum-length TDMA scheduling for wireless-powered networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded instance file")
    gen.add_argument("--config", help="JSON config file (defaults used when omitted)")
    gen.add_argument("--seed", type=int, help="override the realization seed")
    gen.add_argument("--n-users", type=int, help="override the user count")
    gen.add_argument("--out", required=True, help="instance file to write")

    sched = sub.add_parser("schedule", help="run one algorithm on an instance file")
    sched.add_argument("instance", help="instance file from `gen`")
    sched.add_argument("--algo", required=True, choices=ALGORITHMS)
    sched.add_argument("--out", help="schedule file to write")

    val = sub.add_parser("validate", help="check a schedule file against its instance")
    val.add_argument("instance")
    val.add_argument("schedule")

    sweep = sub.add_parser("sweep", help="run the configured sweep, emit CSV")
    sweep.add_argument("--config", help="JSON config file (defaults used when omitted)")
    sweep.add_argument("--seed", type=int, help="override the base seed")
    sweep.add_argument("--out", required=True, help="CSV file to write")
    sweep.add_argument("--format", choices=["csv"], default="csv")
    return parser


def _load(args) -> Config:
    config = load_config(args.config) if args.config else Config()
    if getattr(args, "seed", None) is not None:
        from dataclasses import replace
        config = replace(config, seed=args.seed)
    if getattr(args, "n_users", None) is not None:
        from dataclasses import replace
        config = replace(config, n_users=args.n_users)
    return config


def _cmd_gen(args) -> int:
    config = _load(args)
    realization = generate(config.topology(), config.system_params(),
                           config.user_template())
    write_instance(args.out, realization)
    print(f"wrote {args.out}: {config.n_users} users, seed {config.seed}")
    return EXIT_OK


def _cmd_schedule(args) -> int:
    realization = read_instance(args.instance)
    schedule = run_algorithm(args.algo, realization)
    print(f"{schedule.algorithm_tag}: length {schedule.total_length_s:.9g} s, "
          f"order {schedule.order}"
          + (f", nodes {schedule.node_count}" if schedule.node_count is not None else ""))
    for a in schedule.allocations:
        print(f"  user {a.user_id}: start {a.start_time_s:.9g} s, "
              f"duration {a.duration_s:.9g} s, power {a.power_w:.9g} W")
    if args.out:
        write_schedule(args.out, schedule)
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    realization = read_instance(args.instance)
    schedule = read_schedule(args.schedule)
    report = validate_schedule(realization, schedule)
    print(report)
    return EXIT_OK if report.ok else EXIT_VALIDATION


def _cmd_sweep(args) -> int:
    config = _load(args)
    spec = SweepSpec.from_config(config)
    results, summary = run_sweep(spec)
    emit_csv(results, args.out)
    print(f"wrote {args.out}: {len(results)} rows")
    for (value, algorithm), stats in sorted(summary.items()):
        note = f" ({stats['excluded']} excluded)" if stats["excluded"] else ""
        print(f"  {spec.variable}={value:g} {algorithm}: "
              f"mean {stats['mean_len_s']:.6g} s over {stats['count']}{note}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "gen": _cmd_gen,
        "schedule": _cmd_schedule,
        "validate": _cmd_validate,
        "sweep": _cmd_sweep,
    }[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return EXIT_CONFIG
    except (InfeasibleUser, NumericalError, SizeCapExceeded) as exc:
        print(f"infeasible: {exc}", file=_sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
