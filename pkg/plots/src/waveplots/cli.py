"""Command-line front end.

    plots <run_dir>     render diag.csv + snapshots into three PNGs

Exit codes: 0 success, 1 usage error or unreadable/malformed input.  Created
file paths go to stdout; warnings and errors to stderr.
"""
import argparse
import sys

from .render import RenderError, render_run


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render diagnostics and interface figures from a run directory.")
    parser.add_argument("run_dir", help="directory containing diag.csv and snap_*.csv")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        result = render_run(args.run_dir)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    for path in result.outputs:
        print(path)
    return 0


def console_main() -> None:
    raise SystemExit(main(sys.argv[1:]))
