"""Error table E(t), t = 1..8, for the parabolic similarity solution."""
import argparse

from avalanche1d import harness as hs

RUNS = {
    "NFT(S90)": ("nft", dict(recon="superbee", n=90)),
    "NFT(W90)": ("nft", dict(recon="weno3", n=90)),
    "NFT(S360)": ("nft", dict(recon="superbee", n=360)),
    "NFT(W360)": ("nft", dict(recon="weno3", n=360)),
    "Lag(16)": ("lagrangian", dict(n=16)),
    "Lag(32)": ("lagrangian", dict(n=32)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", nargs="+", default=list(RUNS), choices=list(RUNS))
    args = ap.parse_args()
    cols = {}
    for name in args.runs:
        scheme, kw = RUNS[name]
        r = hs.run(hs.preset("similarity", scheme, **kw))
        cols[name] = r.errors
    print("E x 1e-3")
    print("t   " + "".join(f"{k:>11}" for k in cols))
    for t in range(1, 9):
        print(f"{t:<4}" + "".join(f"{1e3 * e[float(t)]:11.4f}" for e in cols.values()))


if __name__ == "__main__":
    main()
