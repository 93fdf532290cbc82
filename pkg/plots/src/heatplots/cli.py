"""Batch figure rendering.

    heatplots KIND INPUT [INPUT ...] --out FILE.png

Exit codes: 0 figure written, 2 bad inputs (missing file, schema mismatch,
wrong arity). The kind decides how the inputs are read; see figures.KINDS.
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureRequest, render
from .schemas import SchemaError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="heatplots", description=__doc__.splitlines()[0])
    parser.add_argument("kind", choices=sorted(KINDS))
    parser.add_argument("inputs", nargs="+", help="artifact files, order matters for overlay")
    parser.add_argument("--out", required=True, help="output image (.png or .svg)")
    parser.add_argument("--time", type=float, default=None,
                        help="overlay/snapshot target time (nearest stored slice)")
    parser.add_argument("--max-curves", type=int, default=8,
                        help="snapshot: cap on the number of time slices drawn")
    args = parser.parse_args(argv)
    options = {"max_curves": args.max_curves}
    if args.time is not None:
        options["time"] = args.time
    request = FigureRequest(kind=args.kind, inputs=list(args.inputs),
                            output=args.out, options=options)
    try:
        print(render(request))
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
