"""Command-line entry point: figkit render --figure ID --bundle DIR --out PATH."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bundle import FIGURE_IDS, BundleError
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figkit", description="Render figures from CSV bundles")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure bundle")
    p.add_argument("--figure", required=True, choices=FIGURE_IDS)
    p.add_argument("--bundle", type=Path, required=True,
                   help="bundle directory containing manifest.json")
    p.add_argument("--out", type=Path, required=True,
                   help="output image path (.png, .pdf, .svg, ...)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        render(args.figure, args.bundle, args.out)
    except BundleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
