"""Command-line entry point: ``msiopto <subcommand> [--config F] [--set k=v ...]``.

Exit status is 0 on success, 2 for configuration errors and 1 for runtime errors.
"""
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, default_config_text, load_config
from .tables import emit

COMMANDS = {
    "sweep-detuning": ("detuning", "Q_eff, optical damping and spring versus detuning"),
    "sweep-power": ("power", "Q_eff versus input power"),
    "sweep-membrane": ("membrane", "transmission and linewidth versus membrane position"),
    "sweep-srm": ("srm-scan", "transmission versus SRM displacement"),
    "couplings": ("couplings", "dispersive and dissipative coupling rates versus position"),
    "spectrum": ("spectrum", "displacement and back-action noise spectra"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msiopto", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="config file of key = value lines")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key (repeatable)")
        p.add_argument("--out", help="output path ('-' for stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
    sub.add_parser("defaults", help="print every config key with its default")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "defaults":
        sys.stdout.write(default_config_text())
        return 0
    overrides = list(args.set)
    if args.out is not None:
        overrides.append(f"output.path={args.out}")
    if args.format is not None:
        overrides.append(f"output.format={args.format}")
    try:
        cfg = load_config(args.config, overrides, kind=COMMANDS[args.command][0])
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    from .sweeps import run

    try:
        table = run(cfg)
        text = emit(table, cfg.format, cfg.path)
    except Exception as exc:  # noqa: BLE001 - surfaced as a runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if cfg.path in (None, "-"):
        sys.stdout.write(text)
    return 0
