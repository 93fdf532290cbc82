#!/usr/bin/env python3
"""Validate the marcher against both closed-form oracles (pure heat decay and
the spatially flat absorption curve) and write the convergence tables."""

import argparse
import sys

from heatlab.io import write_outcome
from heatlab.presets import run_oracle


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="artifact root (default: out)")
    args = ap.parse_args()

    ok = True
    for name in ("heat", "absorption"):
        outcome = run_oracle(name)
        write_outcome(f"{args.out}/{outcome.name}", outcome)
        for c in outcome.checks:
            mark = "pass" if c.passed else "FAIL"
            print(f"{outcome.name:20s} {mark}  {c.description}: {c.measured}")
        ok = ok and outcome.overall
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
