"""Command line: render one figure id per invocation.

Reads the fig_<name>.csv files produced by `mzherald figure` from
--data-dir and writes one image per invocation.  Exit codes: 0 success,
2 schema or file problem.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .recipes import FIGURE_IDS, FigureRecipe, SchemaError
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzherald-plot",
        description="Render mzherald figure CSV data sets to images.")
    parser.add_argument("--id", required=True, choices=FIGURE_IDS,
                        help="figure id to render")
    parser.add_argument("--data-dir", default="figures",
                        help="directory holding fig_<name>.csv files")
    parser.add_argument("--output", default=None,
                        help="image path (default <data-dir>/fig_<id>.png)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    data_dir = Path(args.data_dir)
    output = Path(args.output) if args.output else \
        data_dir / f"fig_{args.id}.png"
    try:
        recipe = FigureRecipe(args.id, data_dir, output)
        path = render(recipe)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
