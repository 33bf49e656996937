"""Echo-effect demo: a 450-sample cycle and its 150-sample alias bin.

Prints the ds indices of every nonempty C set for the alias bin (k=13) and
the true bin (k=4), then the verdict counts over a set of seeds, next to a
genuine 154-sample signal probed at k=13.

    python3 scripts/echo_effect_demo.py --seeds 20
"""

import argparse

from aliasscope import autocorrelation, diagnose_acf
from aliasscope.de import PEAK_SUPPORTED
from aliasscope.timeseries import SignalSpec, Sinusoid, synthesize

N, M = 3653, 1000


def show(rep):
    print(f"k={rep.k:<3d} [2M/k]={rep.period:<4d} 2ds+ - 100 = {rep.condition7.margin:6.1f}  "
          f"m={rep.condition8.m}  C_m lags {rep.condition8.lag_range}  -> {rep.verdict}")
    for l in rep.partition.I_C:
        lags = rep.partition.C[l]
        print(f"    C_{l:<2d} lags {min(lags):4d}..{max(lags):4d}  ds+ = {rep.ds.ds_plus[l]:5.1f}")


def series(period, ar, seed):
    return synthesize(SignalSpec(N, [Sinusoid(period)], ar_coef=ar, noise_sigma=0.3, seed=seed)).values


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()

    acf = autocorrelation(series(450, 0.5, 0), M)
    print("cos(2 pi t / 450) + AR(1) noise, seed 0")
    show(diagnose_acf(acf, 13, exclude={0}))
    show(diagnose_acf(acf, 4, exclude={0}))

    counts = {"alias k=13": 0, "true k=4": 0, "genuine 154 k=13": 0}
    for seed in range(args.seeds):
        acf = autocorrelation(series(450, 0.5, seed), M)
        counts["alias k=13"] += diagnose_acf(acf, 13, exclude={0}).verdict != PEAK_SUPPORTED
        counts["true k=4"] += diagnose_acf(acf, 4, exclude={0}).verdict == PEAK_SUPPORTED
        acf = autocorrelation(series(154, 0.0, seed), M)
        counts["genuine 154 k=13"] += diagnose_acf(acf, 13, exclude={0}).verdict == PEAK_SUPPORTED
    print()
    for name, c in counts.items():
        print(f"{name:<18s} expected verdict in {c}/{args.seeds} runs")


if __name__ == "__main__":
    main()
