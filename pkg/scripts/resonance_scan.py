"""Map (omega0/omega, cos theta_B) cells where both orbit and spin precess commensurately.

Writes CSV: ratio, cos_theta_B, omega_L/omega, omega_S/omega, N_L, N_S for resonant cells.
A resonant cell is one where omega_L = N_L omega and omega_S = N_S omega. For
integer targets the cell can be solved for directly:
  N_L^2 = r^2 + 1 - 2 r c,  N_S^2 = 4 r^2 + 1 - 4 r c
so r^2 = (N_S^2 - 2 N_L^2 + 1) / 2 and c = (r^2 + 1 - N_L^2) / (2 r).
"""

import argparse
import csv
import math
import sys

from rotomag.scenario import RotatingField, ScenarioA, derive_frame_A, resonance_orders


def resonant_cells(max_order):
    for n_l in range(1, max_order + 1):
        for n_s in range(1, max_order + 1):
            r2 = (n_s**2 - 2 * n_l**2 + 1) / 2
            if r2 <= 0:
                continue
            r = math.sqrt(r2)
            c = (r2 + 1 - n_l**2) / (2 * r)
            if -1 < c < 1:
                yield n_l, n_s, r, c


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=5)
    args = ap.parse_args()
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["ratio", "cos_theta_B", "omega_L_over_omega", "omega_S_over_omega", "N_L", "N_S", "confirmed"])
    for n_l, n_s, r, c in resonant_cells(args.max_order):
        sc = ScenarioA(RotatingField(1.0, math.acos(c)), r, 1)
        fr = derive_frame_A(sc)
        confirmed = resonance_orders(sc) == (n_l, n_s)
        out.writerow([repr(r), repr(c), repr(fr.omega_L), repr(fr.omega_S), n_l, n_s, str(confirmed).lower()])


if __name__ == "__main__":
    main()
