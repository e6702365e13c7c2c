"""How the calibrated constant of the strip calculus bound moves with the strip width.

For each seed, the bounded-group sweep of the ``main-theorem`` experiment is
repeated and the per-width constants C(omega) = 1.5 * max ratio are printed,
together with the function that attains each maximum. The ratio
max C / min C is the quantity the experiment limits to 1.25.

    python3 scripts/omega_sweep.py --seeds 0 1 2 3 4 5 6
"""

import argparse
from collections import Counter

from translab.config import ExperimentConfig
from translab.experiments import CAL_SAFETY, OMEGAS, _main_ratios


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, nargs="*", default=list(range(7)))
    ap.add_argument("--cases", type=int, default=4)
    args = ap.parse_args()

    print("seed," + ",".join(f"C({om:g})" for om in OMEGAS) + ",spread,argmax")
    for seed in args.seeds:
        cfg = ExperimentConfig("main-theorem", seed=seed)
        sweep = _main_ratios(cfg, 123, 0, args.cases, "bounded", OMEGAS)
        consts, winners = [], Counter()
        for om in OMEGAS:
            case, r = max(sweep[om], key=lambda cr: cr[1])
            consts.append(CAL_SAFETY * r)
            winners[case.split("/")[1]] += 1
        spread = max(consts) / min(consts)
        print(f"{seed}," + ",".join(f"{c:.4g}" for c in consts) + f",{spread:.3f},"
              + "|".join(winners))


if __name__ == "__main__":
    main()
