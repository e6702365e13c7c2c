"""Run every acceptance experiment at both grid levels and write one CSV.

    python3 scripts/run_suite.py --out results/suite.csv --seed 0 --workers 2
"""

import argparse
import sys
from pathlib import Path

from translab.harness import suite_all, suite_configs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/suite.csv")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--only", nargs="*")
    args = ap.parse_args()

    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    cfgs = suite_configs(args.seed)
    if args.only:
        cfgs = [c for c in cfgs if c.experiment in args.only]
    summary = suite_all(configs=cfgs, out=args.out, workers=args.workers)
    return 0 if summary.passed else 1


if __name__ == "__main__":
    sys.exit(main())
