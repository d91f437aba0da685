"""Command line front end: clssh-figs FIGURE --inputs ... --out FILE."""

import argparse
import sys

from .figures import FIGURES, FigureSpec, render
from .schema import SchemaError


def build_parser():
    parser = argparse.ArgumentParser(
        prog="clssh-figs",
        description="Render figures from clssh output files.",
    )
    parser.add_argument("figure", choices=sorted(FIGURES),
                        help="which figure to render")
    parser.add_argument("--inputs", nargs="+", required=True, metavar="FILE",
                        help="input data files, in panel order")
    parser.add_argument("--out", required=True, metavar="FILE",
                        help="output image path (extension picks the format)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    spec = FigureSpec(figure=args.figure, inputs=tuple(args.inputs),
                      output=args.out)
    try:
        out = render(spec)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort reporting
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 3
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
