"""plot-embed: CSVs in, comparison figure out."""
from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-embed",
        description="Plot block error rate against average cost from wpc CSVs",
    )
    parser.add_argument(
        "--csv", action="append", required=True, help="input CSV (repeatable)"
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--group-by", default="scheme,k", help="comma-separated grouping columns"
    )
    parser.add_argument("--title", default="")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    spec = PlotSpec(
        csv_paths=tuple(args.csv),
        out_path=args.out,
        group_by=tuple(args.group_by.split(",")),
        title=args.title,
        dpi=args.dpi,
    )
    try:
        render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
