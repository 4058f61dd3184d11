"""Upslope travelling shock with the NOC scheme: shock position, overshoot
and L1 error at t=6 for each reconstruction."""
import argparse

import numpy as np

from avalanche1d import harness as hs
from avalanche1d.exact import shock_speed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=360)
    ap.add_argument("--t", type=float, default=6.0)
    ap.add_argument("--recon", nargs="+", default=["superbee", "weno2", "weno3"])
    args = ap.parse_args()

    s = hs.shock_setup(hs.preset("shock", "noc"))
    target = s.x0 + args.t * shock_speed(s).V_n
    print(f"exact shock position {target:.4f}")
    print(f"{'recon':>9} {'x_s':>8} {'overshoot':>10} {'L1 off band':>12} {'E':>10}")
    for recon in args.recon:
        r = hs.run(hs.preset("shock", "noc", recon=recon, n=args.n, checkpoints=(args.t,)))
        cfg, c = r.config, r.checkpoint(args.t)
        edges = cfg.x_min + cfg.dx * np.arange(cfg.n + 1)
        exact = hs.build_problem(cfg).oracle_avg(edges, args.t)
        xs = hs.locate_shock(c.x, c.h, c.u)
        over = max(c.h.max() - s.h_minus, s.h_plus - c.h.min(), 0.0)
        off = np.abs(c.x - xs) > 2 * cfg.dx
        l1 = np.sum(np.abs(c.h - exact)[off]) * cfg.dx
        print(f"{recon:>9} {xs:8.3f} {over:10.2e} {l1:12.3e} {c.E:10.3e}")


if __name__ == "__main__":
    main()
