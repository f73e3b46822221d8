"""Batch figure CLI.

``mccdma-plots curves`` draws BER/FER waterfalls from results CSVs;
``mccdma-plots load`` draws required-Eb/N0 versus active codes from an
extraction CSV.  Exit codes: 0 success, 1 bad arguments/schema, 2 I/O.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, plot_curves, plot_load


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mccdma-plots",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--in", dest="inputs", action="append", required=True,
                       help="input CSV (repeatable)")
        p.add_argument("--out", required=True,
                       help="output image (extension picks the format; "
                            "vector formats such as .pdf or .svg preferred)")
        p.add_argument("--detectors",
                       help="comma list of detector ids to include")

    curves = sub.add_parser("curves", help="metric vs Eb/N0 waterfalls")
    common(curves)
    curves.add_argument("--metric", choices=("ber", "fer"), default="ber")
    curves.add_argument("--target", type=float,
                        help="draw a horizontal target-rate line")
    curves.set_defaults(renderer=plot_curves)

    load = sub.add_parser("load", help="required Eb/N0 vs active codes")
    common(load)
    load.set_defaults(renderer=plot_load, metric="ber", target=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    detectors = tuple(args.detectors.split(",")) if args.detectors else None
    try:
        spec = FigureSpec(inputs=tuple(args.inputs), output=args.out,
                          metric=args.metric, target=args.target,
                          detectors=detectors)
        args.renderer(spec)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
