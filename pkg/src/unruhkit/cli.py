"""Command-line interface: sweep, figure and verify subcommands.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .errors import ParseError, UnknownPresetError
from .sweep import emit_csv, figure_preset, parse_spec, run_sweep
from .verify import run_verification
from .version import __version__

_SWEEP_FLAGS = (
    "channel",
    "vary",
    "range",
    "x",
    "p",
    "q",
    "r",
    "quantity",
    "method",
    "qfi-form",
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for
    # verification failures, so remap to 1.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="unruhkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"unruhkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser(
        "sweep",
        help="run a declarative parameter sweep and emit CSV",
        description=(
            "Flags: --channel white|color|whitecolor, --vary p|q|x|r, "
            "--range start:stop:step, --x/--p/--q/--r scalar or comma-list "
            "(lists become series), --quantity concurrence|qfi-p|qfi-q|qfi-x|qfi-r, "
            "--method numeric|closed|both, --qfi-form single|two, --out FILE, "
            "--config FILE (line-oriented key=value; flags win)."
        ),
    )
    for flag in _SWEEP_FLAGS:
        sweep.add_argument(f"--{flag}", dest=flag.replace("-", "_"))
    sweep.add_argument("--out")
    sweep.add_argument("--config")

    figure = sub.add_parser("figure", help="run a published-figure preset")
    figure.add_argument("preset", help="e.g. fig1a ... fig11c")
    figure.add_argument("--out")

    verify = sub.add_parser(
        "verify",
        help="cross-check every closed form against its numerical oracle",
        description=(
            "--tol sets the closed-vs-numeric concurrence threshold; the state, "
            "QFI and data-processing thresholds are fixed contracts."
        ),
    )
    verify.add_argument("--tol", type=float, default=1e-8)
    verify.add_argument("--grid", type=int, default=21)
    return parser


def _sweep_argv(args: argparse.Namespace) -> list[str]:
    argv: list[str] = []
    for flag in _SWEEP_FLAGS:
        value = getattr(args, flag.replace("-", "_"))
        if value is not None:
            argv.extend([f"--{flag}", value])
    return argv


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            config_text = None
            if args.config is not None:
                try:
                    with open(args.config, encoding="utf-8") as stream:
                        config_text = stream.read()
                except OSError as exc:
                    print(f"unruhkit: cannot read config: {exc}", file=sys.stderr)
                    return 3
            spec = parse_spec(_sweep_argv(args), config_text=config_text)
            table = run_sweep(spec)
            emit_csv(table, args.out)
            return 0
        if args.command == "figure":
            spec = figure_preset(args.preset)
            table = run_sweep(spec)
            emit_csv(table, args.out)
            return 0
        if args.command == "verify":
            try:
                report = run_verification(tolerance=args.tol, grid_n=args.grid)
            except ValueError as exc:
                print(f"unruhkit: {exc}", file=sys.stderr)
                return 1
            print(report.render())
            return 0 if report.overall_pass else 2
    except (ParseError, UnknownPresetError) as exc:
        print(f"unruhkit: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"unruhkit: i/o error: {exc}", file=sys.stderr)
        return 3
    return 0


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
