"""Command line front end: ``plotview <kind> --in <csv...> --out <png>``.

The report for the log_l2 envelope comes from ``--report``; as a convenience
any ``.txt`` path listed under ``--in`` is treated the same way.
"""

import argparse
import sys

from .figures import KINDS, FigureSpec, InputContractError, render


def build_parser():
    p = argparse.ArgumentParser(prog="plotview",
                                description="render dune-lab CSV outputs into figures")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--in", dest="inputs", action="append", required=True,
                   metavar="PATH", help="input csv (repeatable); a .txt counts as the report")
    p.add_argument("--out", required=True, help="output image path (png)")
    p.add_argument("--report", default=None,
                   help="run report carrying the alpha= line (log_l2 only)")
    p.add_argument("--xlabel", default=None)
    p.add_argument("--ylabel", default=None)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    csvs = tuple(p for p in args.inputs if not p.endswith(".txt"))
    texts = [p for p in args.inputs if p.endswith(".txt")]
    report = args.report or (texts[0] if texts else None)
    if not csvs:
        print("plotview: every --in is a .txt; need at least one csv", file=sys.stderr)
        return 2
    spec = FigureSpec(kind=args.kind, csv_paths=csvs, out=args.out,
                      xlabel=args.xlabel, ylabel=args.ylabel, report=report)
    try:
        out = render(spec)
    except InputContractError as exc:
        print(f"plotview: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
