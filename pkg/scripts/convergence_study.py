"""RK4 oracle error against the exact propagator as the step count doubles.

Prints one CSV row per step count plus the fitted order, for the resonant
l = 1 electron or any scenario given by a config file.
"""

import argparse
import csv
import sys

from rotomag.config import load_config
from rotomag.oracle import convergence_order


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=None)
    ap.add_argument("--set", action="append", default=[])
    ap.add_argument("--levels", type=int, default=5)
    ap.add_argument("--periods", type=float, default=1.0)
    args = ap.parse_args()
    sc = load_config(args.config, args.set).scenario_obj()
    study = convergence_order(sc, args.periods * sc.field.period, levels=args.levels)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["steps", "error"])
    for n, err in zip(study.steps, study.errors):
        out.writerow([n, repr(err)])
    print(f"# fitted order {study.order:.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
