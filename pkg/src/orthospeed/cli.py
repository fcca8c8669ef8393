"""Command-line entry point: ``orthospeed <command> [options]``.

Exit codes: 0 success, 1 configuration error, 2 numerical invariant violated.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, runner
from .chain import InvariantViolation
from .config import ConfigError, load
from .presets import PRESETS, get_preset

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT = 0, 1, 2

_RUNS = {
    "simulate": (runner.run_signal, "csv"),
    "sweep": (runner.run_sweep, "csv"),
    "events": (runner.run_events, "json"),
    "verify": (runner.run_verify, "text"),
}


def _common(p: argparse.ArgumentParser, preset_flag: bool = True) -> None:
    p.add_argument("--config", help="INI file with chain/state/grid/detection sections")
    if preset_flag:
        p.add_argument("--preset", help="start from a named preset (see list-presets)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", dest="fmt", help="csv, json, svg (or text for verify)")
    p.add_argument("--threads", type=int, default=1, help="worker threads (output is unaffected)")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one setting, e.g. chain.gamma=0.5 (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthospeed",
        description="Orthogonality speed of two qubits coupled to an XY spin chain.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "overlap signal S_or(t) and S14(t) as a table"),
        ("sweep", "|S_or| over a two-axis grid, long format"),
        ("events", "orthogonality event times"),
        ("verify", "compare the product formula with the exact pair propagation"),
    ):
        _common(sub.add_parser(name, help=help_text))
    fig = sub.add_parser("figure", help="reproduce one figure panel from a preset")
    fig.add_argument("preset_name", metavar="preset")
    _common(fig, preset_flag=False)
    sub.add_parser("list-presets", help="list figure presets")
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-presets":
        width = max(len(n) for n in PRESETS)
        for name, preset in PRESETS.items():
            print(f"{name:<{width}}  {preset.mode:<6}  {preset.description}")
        return EXIT_OK
    try:
        if args.threads < 1:
            raise ConfigError("--threads", "must be at least 1")
        if args.command == "figure":
            preset = get_preset(args.preset_name)
            func = runner.run_signal if preset.mode == "signal" else runner.run_sweep
            fmt = args.fmt or "svg"
            config = load(args.config, preset.name, args.overrides)
        else:
            func, default_fmt = _RUNS[args.command]
            fmt = args.fmt or default_fmt
            config = load(args.config, args.preset, args.overrides)
        text = func(config, fmt, args.threads)
        _emit(text, args.out)
    except ConfigError as exc:
        print(f"orthospeed: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolation as exc:
        print(f"orthospeed: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"orthospeed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
