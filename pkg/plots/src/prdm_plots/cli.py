"""Command line entry: render a chart from one CSV table per invocation."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .charts import render_residuals, render_sweep
from .tables import TableError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prdm-plots",
        description=(
            "Render charts from prdm CSV tables: attack-utility sweeps and"
            " residual-vs-scale curves."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="utility-vs-delta lines, one per scenario")
    p_sweep.add_argument("csv", help="sweep CSV path (from `prdm sweep`)")
    p_sweep.add_argument(
        "--output", default="sweep.png", help="image path (default sweep.png)"
    )

    p_resid = sub.add_parser("residual", help="residual budget vs capacity scale")
    p_resid.add_argument("csv", help="residual CSV path (from `prdm check --abb-csv`)")
    p_resid.add_argument(
        "--output", default="residual.png", help="image path (default residual.png)"
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            render_sweep(args.csv, args.output)
        else:
            render_residuals(args.csv, args.output)
    except (TableError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
