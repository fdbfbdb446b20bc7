"""Geometric phase of each cyclic eigenstate versus field tilt, closed form next to the oracle.

Sweeps theta_B for scenario A at fixed omega0/omega and writes a plot-ready CSV.
The oracle column integrates the lab-frame equation directly and is slower;
pass --no-oracle for the analytic columns alone.
"""

import argparse
import csv
import math
import sys

import numpy as np

from rotomag.heff import analytic_eigensystem_A
from rotomag.oracle import oracle_phases_all
from rotomag.phases import cyclic_phase_report, phase_distance
from rotomag.scenario import DegenerateFrameError, RotatingField, ScenarioA, derive_frame_A


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ratio", type=float, default=math.sqrt(1.5), help="omega0 / omega")
    ap.add_argument("--l", type=int, default=1)
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--no-oracle", action="store_true")
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["theta_B", "m", "ms", "theta_L", "theta_S", "gamma", "gamma_closed_form", "oracle_gamma", "oracle_dev"])
    for theta in np.linspace(0.05, math.pi - 0.05, args.points):
        sc = ScenarioA(RotatingField(1.0, float(theta)), args.ratio, args.l)
        try:
            fr = derive_frame_A(sc)
        except DegenerateFrameError:
            continue
        system = analytic_eigensystem_A(sc)
        oracle = [None] * len(system) if args.no_oracle else oracle_phases_all(sc, system.states, args.steps)
        for lab, orc in zip(system.labels, oracle):
            rep = cyclic_phase_report(sc, lab)
            og = "" if orc is None else repr(orc.geometric)
            dev = "" if orc is None else repr(phase_distance(orc.geometric, rep.gamma))
            out.writerow([repr(float(theta)), lab[0], lab[1], repr(fr.theta_L), repr(fr.theta_S),
                          repr(rep.gamma), repr(rep.gamma_closed_form), og, dev])


if __name__ == "__main__":
    main()
