"""plotkit command line: render a sweep CSV to a comparison figure."""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Plot mean overlap fraction vs corruption budget from a sweep CSV.",
    )
    parser.add_argument("--csv", required=True, help="sweep records CSV (schema v1)")
    parser.add_argument("--out", required=True, help="output image path (PNG)")
    parser.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=None,
        help="side split of the corruption budget for the reference curve "
        "(default: taken from the CSV)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = render(PlotSpec(csv_path=args.csv, out_path=args.out, lam=args.lam))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(
        f"wrote {result.out_path} "
        f"({len(result.algorithms)} curves, lambda={result.lam})"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
