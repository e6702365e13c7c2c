"""Freeze the calibration constants used by the bound experiments.

Runs the calibration suites of ``mikhlin-bound`` and ``main-theorem`` (their
own random streams, disjoint from the test suites) at the default grid and
writes ``C_cal = 1.5 * max ratio`` for each (theta, q, p) given.

    python3 scripts/calibrate.py                      # default pair, package file
    python3 scripts/calibrate.py --pairs 0.5,2 0.3,1 --out my.cal
"""

import argparse
from pathlib import Path

from translab.config import (ExperimentConfig, calibration_key, parse_exponent, read_calibration,
                             write_calibration)
from translab.experiments import EXPERIMENTS
from translab.harness import DEFAULT_CALIBRATION

CALIBRATED = ("mikhlin-bound", "main-theorem")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default=str(DEFAULT_CALIBRATION))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pairs", nargs="*", default=["0.5,2"], help="theta,q pairs")
    ap.add_argument("--force", action="store_true", help="recompute keys already present")
    args = ap.parse_args()

    out = Path(args.out)
    if args.force and out.exists():
        kept = {k: v for k, v in read_calibration(out).items() if not k.startswith(CALIBRATED)}
        out.unlink()
        write_calibration(out, kept)
    for pair in args.pairs:
        theta, q = pair.split(",")
        for name in CALIBRATED:
            cfg = ExperimentConfig(name, theta=float(theta), q=parse_exponent(q), seed=args.seed,
                                   calibration=str(out))
            res = EXPERIMENTS[name](cfg)
            key = calibration_key(name, cfg.theta, cfg.q, cfg.p)
            print(f"{key} = {read_calibration(out)[key]:.6g}   (test max ratio {res.metrics['max_ratio']:.6g})")


if __name__ == "__main__":
    main()
