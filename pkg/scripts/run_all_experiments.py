#!/usr/bin/env python3
"""Run every named preset and drop the artifacts under out/ (one directory
per experiment). Exits nonzero if any conclusion fails."""

import argparse
import sys
import time

from heatlab.io import write_outcome
from heatlab.presets import available_presets, run_preset


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="artifact root (default: out)")
    ap.add_argument(
        "--only", nargs="*", default=None, help="subset of presets to run (default: all)"
    )
    args = ap.parse_args()

    names = args.only if args.only else available_presets()
    failures = []
    for name in names:
        t0 = time.time()
        outcome = run_preset(name)
        write_outcome(f"{args.out}/{outcome.name}", outcome)
        status = "pass" if outcome.overall else "FAIL"
        print(f"{name:24s} {status}  ({time.time() - t0:5.1f}s)")
        if not outcome.overall:
            failures.append(name)
            for c in outcome.checks:
                if not c.passed:
                    print(f"    failed: {c.description}: {c.measured} (want {c.threshold})")
    if failures:
        print(f"{len(failures)} experiment(s) failed: {', '.join(failures)}")
        return 1
    print(f"all {len(names)} experiments passed; artifacts under {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
