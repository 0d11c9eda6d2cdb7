"""Command-line entry point: ``hnflow <command> --config run.toml``.

Exit status is 0 when every verdict passes, 1 when some verdict fails and
2 for configuration or usage errors.
"""

from __future__ import annotations

import argparse
import copy
import os
import sys
import time

from . import __version__
from .config import ConfigError, load_config, parse_config
from .report import to_csv, to_json

COMMAND_NAMES = ("tau", "polygon", "hn", "sweep", "simulate", "scan", "exponents", "verify")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hnflow",
        description="Slopes, HN filtrations and successive-minima experiments for diagonal flows.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMAND_NAMES)
    parser.add_argument("--config", help="TOML run config, or a JSON report to re-run")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--threads", type=int, default=None,
                        help="parallel workers (default: $HNFLOW_THREADS or 1)")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--precision-margin", type=int, default=None, metavar="BITS",
                        help="override simulate.precision_margin_bits")
    parser.add_argument("--timing", action="store_true",
                        help="record wall time (reports are then no longer byte-identical)")
    parser.add_argument("--quiet", action="store_true", help="suppress the verdict table on stderr")
    return parser


def _threads(arg) -> int:
    if arg is not None:
        n = arg
    else:
        env = os.environ.get("HNFLOW_THREADS", "1")
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"HNFLOW_THREADS={env!r} is not an integer")
    if n < 1:
        raise ConfigError("thread count must be >= 1")
    return n


def _load(args):
    if args.config is None:
        if args.command != "verify":
            raise ConfigError(f"{args.command} requires --config")
        return None
    cfg = load_config(args.config)
    if args.seed is None and args.precision_margin is None:
        return cfg
    raw = copy.deepcopy(cfg.raw)
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.precision_margin is not None:
        if "simulate" not in raw:
            raise ConfigError("--precision-margin needs a [simulate] section")
        raw["simulate"]["precision_margin_bits"] = args.precision_margin
    return parse_config(raw)


def main(argv=None) -> int:
    from .commands import run_command

    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        threads = _threads(args.threads)
        cfg = _load(args)
        report = run_command(args.command, cfg, threads, args.timing)
    except ConfigError as exc:
        print(f"hnflow: config error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        report.wall_time = round(time.perf_counter() - t0, 3)
    text = to_json(report) if args.format == "json" else to_csv(report)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        for name, ok in report.verdicts.items():
            print(f"{'PASS' if ok else 'FAIL'}  {name}", file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
