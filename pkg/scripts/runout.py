"""Run-out onto a horizontal plane with front tracking; prints the shock
and front diagnostics per checkpoint and optionally writes CSV output."""
import argparse
from pathlib import Path

from avalanche1d import harness as hs
from avalanche1d.cli import write_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--recon", default="weno3")
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()

    r = hs.run(hs.preset("runout", "nft", recon=args.recon))
    d = hs.runout_diagnostics(r)
    shocks = dict(d.shock_positions)
    print(f"{'t':>5} {'tail':>8} {'front':>8} {'shock':>8}")
    for c in r.checkpoints:
        xs = f"{shocks[c.t]:8.3f}" if c.t in shocks else f"{'-':>8}"
        print(f"{c.t:5.1f} {c.x_tail:8.3f} {c.x_front:8.3f} {xs}")
    print(f"shock formed at t={d.shock_formed_at}, upslope={d.upslope_motion}, front at rest={d.final_front_at_rest}")
    print(f"clips={r.clips}, mass drift={r.mass_drift:.2e}")
    if args.out:
        write_report(r, args.out)


if __name__ == "__main__":
    main()
