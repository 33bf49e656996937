"""Verdicts for a noiseless cosine at its own bin and at its harmonic bins.

For x_t = cos(2 pi t / P) the bin k0 = round(2M/P) probes the true period
while 2 k0 and 3 k0 probe harmonics. The share margin at k0 sits
near zero because cos^2 mass splits evenly between C and B sets.

    python3 scripts/harmonic_bins.py
"""

from aliasscope import autocorrelation, diagnose_acf
from aliasscope.timeseries import SignalSpec, Sinusoid, synthesize

M = 1000

print(f"{'P':>4} {'k':>4} {'[2M/k]':>7} {'margin':>8} {'m':>3} {'cond8':>6}  verdict")
for P in (100, 154, 200, 400):
    acf = autocorrelation(synthesize(SignalSpec(20 * P + M, [Sinusoid(P)])).values, M)
    k0 = round(2 * M / P)
    for k in (k0, 2 * k0, 3 * k0):
        rep = diagnose_acf(acf, k, exclude={0})
        print(f"{P:4d} {k:4d} {rep.period:7d} {rep.condition7.margin:8.2f} {rep.condition8.m:3d} "
              f"{str(rep.condition8.passed):>6}  {rep.verdict}")
