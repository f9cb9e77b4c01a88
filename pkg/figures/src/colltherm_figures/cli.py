"""Command line for rendering sweep CSVs to images."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .io import SchemaError
from .render import FigureSpec, load_style, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figures",
                                     description="Render colltherm sweep CSVs")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind, text in (("heatmap", "coupling-grid heatmap with the level-1 contour"),
                       ("scaling", "log-log scaling plot with reference lines")):
        p = sub.add_parser(kind, help=text)
        p.add_argument("csv", help="input CSV from the sweep generator")
        p.add_argument("-o", "--out", required=True, help="output image path")
        p.add_argument("--style", help="key = value style file")
        p.add_argument("--x-scale", choices=["lin", "log"], dest="x_scale")
        p.add_argument("--y-scale", choices=["lin", "log"], dest="y_scale")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            csv_path=args.csv,
            kind=args.kind,
            out_path=args.out,
            x_scale=args.x_scale,
            y_scale=args.y_scale,
            style=load_style(args.style) if args.style else {},
        )
        result = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {result.path}")
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
