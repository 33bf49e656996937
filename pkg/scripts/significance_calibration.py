"""Monte-Carlo size of the white-noise tests and the AR(1) red-noise level.

    python3 scripts/significance_calibration.py --trials 1000 --n 512
"""

import argparse

import numpy as np

from aliasscope import autocorrelation
from aliasscope.significance import fisher_test, fourier_periodogram, ks_white_noise_test, red_noise_level
from aliasscope.timeseries import SignalSpec, synthesize


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--r", type=float, default=0.7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    fisher = ks = 0
    for _ in range(args.trials):
        ords = fourier_periodogram(rng.normal(size=args.n))
        fisher += fisher_test(ords).reject
        ks += ks_white_noise_test(ords).reject
    print(f"white noise N={args.n}: Fisher rejects {fisher / args.trials:.3f}, KS rejects {ks / args.trials:.3f}")

    n = 2 * args.n
    bands = [(0.0, 0.05), (0.05, 0.25), (0.25, 0.5)]
    hits = np.zeros(len(bands))
    tot = np.zeros(len(bands))
    for _ in range(args.trials // 3):
        x = synthesize(SignalSpec(n, [], args.r, 1.0, seed=int(rng.integers(1 << 31)))).values
        pg = fourier_periodogram(x)
        level = red_noise_level(autocorrelation(x, n // 10), pg, 0.95)
        for i, (lo, hi) in enumerate(bands):
            sel = (pg.frequency > lo) & (pg.frequency <= hi)
            hits[i] += np.count_nonzero(pg.values[sel] > level[sel])
            tot[i] += np.count_nonzero(sel)
    print(f"AR(1) r={args.r} N={n}: fraction of bins above the 95% level")
    for (lo, hi), h, t in zip(bands, hits, tot):
        print(f"    f in ({lo:.2f}, {hi:.2f}]  {h / t:.3f}")


if __name__ == "__main__":
    main()
