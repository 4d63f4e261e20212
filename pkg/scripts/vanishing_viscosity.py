"""Distance between viscous and front-tracking solutions of a Riemann problem as eps shrinks."""
import argparse
import json

import numpy as np

from conslaw import get_model
from conslaw.front_tracking import TrackingParams, discretize_initial, evolve
from conslaw.viscous import vanishing_viscosity_study, write_viscosity_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", default="burgers")
    ap.add_argument("--left", default="[1.0]", help="JSON state")
    ap.add_argument("--right", default="[0.0]", help="JSON state")
    ap.add_argument("--eps", type=float, nargs="+", default=[0.04, 0.02, 0.01, 0.005])
    ap.add_argument("--t-end", type=float, default=1.0)
    ap.add_argument("--span", type=float, nargs=2, default=[-2.0, 2.0])
    ap.add_argument("--scheme", choices=["explicit", "semi_implicit"], default="explicit")
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    m = get_model(args.model)
    ul, ur = np.array(json.loads(args.left), float), np.array(json.loads(args.right), float)
    init = discretize_initial(m, ([0.0], [ul, ur]), 1.0, np.inf, eps_fan=0.001)
    ref = evolve(m, init, args.t_end, TrackingParams(eps_fan=0.001, max_fronts=10**5)).state
    u_bar = lambda x: ul if x < 0 else ur
    rows = vanishing_viscosity_study(m, u_bar, args.eps, args.t_end, ref, tuple(args.span), scheme=args.scheme)
    print(f"{'eps':>8} {'dx':>9} {'L1':>10} {'BV ratio':>9}")
    for r in rows:
        print(f"{r.epsilon:8.4f} {r.dx:9.5f} {r.L1_distance:10.4e} {r.bv_ratio:9.3f}")
    if args.csv:
        write_viscosity_csv(rows, args.csv)


if __name__ == "__main__":
    main()
