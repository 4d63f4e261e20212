"""Glimm error table for Burgers Riemann data on a user-chosen mesh list."""
import argparse
import math

import numpy as np

from conslaw import get_model
from conslaw.front_tracking import TrackingParams, discretize_initial, evolve
from conslaw.glimm import error_rate_study, write_rate_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--left", type=float, default=0.0)
    ap.add_argument("--right", type=float, default=1.0)
    ap.add_argument("--dx", type=float, nargs="+", default=[0.02, 0.01, 0.005, 0.0025])
    ap.add_argument("--ratio", type=float, default=2.0, help="dx/dt")
    ap.add_argument("--t-end", type=float, default=1.0)
    ap.add_argument("--sampler", choices=["vdc", "uniform"], default="vdc")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    m = get_model("burgers")
    ul, ur = args.left, args.right
    eps_ref = min(args.dx) / 100
    init = discretize_initial(m, ([0.0], [[ul], [ur]]), 1.0, math.inf, eps_fan=eps_ref)
    ref = evolve(m, init, args.t_end, TrackingParams(eps_fan=eps_ref, max_fronts=10**6)).state
    u_bar = lambda x: np.array([ul if x < 0 else ur])
    span = (-1.0, 1.0 + 2 * args.t_end)
    rows = error_rate_study(m, u_bar, args.dx, args.ratio, args.t_end, span, ref, args.sampler, args.seed, window=span)
    print(f"{'dx':>10} {'dt':>10} {'L1 error':>12} {'ratio':>10}")
    for r in rows:
        print(f"{r.dx:10.5f} {r.dt:10.5f} {r.L1_error:12.4e} {r.rate_ratio:10.4f}")
    if args.csv:
        write_rate_csv(rows, args.csv)


if __name__ == "__main__":
    main()
