"""fgpe-plots: render figures from fgpe run artifacts.

    fgpe-plots render --kind sweep_trends --out trends.png sweep.csv sweep_summary.json

Exit codes: 0 rendered, 2 schema/empty-input error (with a column diff on
stderr when applicable).
"""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_KINDS, FigureSpec, render
from .schemas import EmptyInputError, SchemaError


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="fgpe-plots", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("render")
    rp.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    rp.add_argument("--out", required=True)
    rp.add_argument("--xlabel", default=None)
    rp.add_argument("--ylabel", default=None)
    rp.add_argument("inputs", nargs="+",
                    help="artifact paths (field inputs by basename, no suffix)")
    args = ap.parse_args(argv)
    labels = {}
    if args.xlabel:
        labels["x"] = args.xlabel
    if args.ylabel:
        labels["y"] = args.ylabel
    try:
        spec = FigureSpec(kind=args.kind, inputs=tuple(args.inputs),
                          output=args.out, labels=labels)
        out = render(spec)
    except (SchemaError, EmptyInputError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
