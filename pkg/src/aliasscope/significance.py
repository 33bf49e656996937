"""Significance of periodogram peaks: AR(1) red-noise level or white-noise tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
from scipy import stats
from scipy.special import gammaln

from .autocorr import AutocorrFunction
from .errors import InvalidArgumentError, InvalidAutocorrelationError
from .periodogram import Periodogram, one_sided_power
from .timeseries import values_of

MARKOV = "markov_red_noise"
WHITE = "white_noise"

NU_RAW = 2.0
# equivalent degrees of freedom used for 3-point smoothed BT estimates
NU_SMOOTHED = 8.0 / 3.0


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    reject: bool


@dataclass(frozen=True)
class SignificanceResult:
    regime: str
    alpha: float = 0.05
    red_noise_level: Optional[np.ndarray] = None
    lag1: Optional[float] = None
    fisher: Optional[TestResult] = None
    ks: Optional[TestResult] = None

    def significant_at(self, periodogram: Periodogram, index) -> np.ndarray:
        """Per-bin significance for bins ``index`` of ``periodogram``.

        Red-noise regime: the power exceeds the level. White-noise regime: the
        series as a whole rejects white noise under either test.
        """
        index = np.asarray(index)
        if self.regime == MARKOV:
            return periodogram.values[index] > self.red_noise_level[index]
        return np.full(index.shape, bool(self.fisher.reject or self.ks.reject))


def detect_markov_persistence(acf: AutocorrFunction) -> bool:
    """Lag-1 autocorrelation above ``2/sqrt(N)``."""
    return bool(acf.c[1] > 2.0 / np.sqrt(acf.n_samples))


def red_noise_continuum(frequency, r: float) -> np.ndarray:
    """AR(1) spectral shape ``(1 - r^2) / (1 + r^2 - 2 r cos(2 pi f))``.

    For BT bin ``k`` of cutoff ``M`` the frequency is ``k / 2M``, giving the
    familiar ``cos(pi k / M)`` form.
    """
    if not -1.0 < r < 1.0:
        raise InvalidAutocorrelationError(f"lag-1 autocorrelation {r} outside (-1, 1)")
    f = np.asarray(frequency, dtype=float)
    return (1.0 - r * r) / (1.0 + r * r - 2.0 * r * np.cos(2.0 * np.pi * f))


def red_noise_level(acf: AutocorrFunction, periodogram: Periodogram, confidence: float = 0.95,
                    nu: Optional[float] = None) -> np.ndarray:
    """Per-bin confidence level of the AR(1) null with ``r = c_1``.

    The continuum is scaled to the periodogram's mean power and multiplied
    by ``chi2.ppf(confidence, nu) / nu``. ``nu`` defaults to 2 for raw
    estimates (FFT, raw BT) and 8/3 for smoothed BT estimates.
    """
    if nu is None:
        nu = NU_SMOOTHED if periodogram.method == "bt_smoothed" else NU_RAW
    shape = red_noise_continuum(periodogram.frequency, float(acf.c[1]))
    null = shape * periodogram.mean_power() / shape.mean()
    return null * stats.chi2.ppf(confidence, nu) / nu


def fourier_periodogram(series) -> Periodogram:
    """Unwindowed, unpadded periodogram at Fourier frequencies ``j/N``, ``1 <= j <= (N-1)//2``.

    The Nyquist ordinate (even N) is left out so all ordinates share the
    same null distribution.
    """
    x = values_of(series)
    n = x.size
    q = (n - 1) // 2
    p = one_sided_power(x - x.mean(), n)
    j = np.arange(1, q + 1)
    return Periodogram("fft", p[1:q + 1], j / n, n / j, j, window_name="none", n_samples=n)


def _as_ordinates(periodogram_or_series):
    if isinstance(periodogram_or_series, Periodogram):
        return np.asarray(periodogram_or_series.values, dtype=float)
    return fourier_periodogram(periodogram_or_series).values


def fisher_g_pvalue(g: float, q: int) -> float:
    """Exact tail probability of Fisher's g for ``q`` ordinates.

    ``P(G > g) = sum_{j=1}^{floor(1/g)} (-1)^(j+1) C(q, j) (1 - j g)^(q-1)``.
    The alternating sum cancels badly, so it is evaluated with enough
    decimal digits to cover the largest term.
    """
    if g <= 1.0 / q:
        return 1.0
    if g >= 1.0:
        return 0.0
    jmax = min(q, int(np.floor(1.0 / g)))
    # log10 of the largest term bounds the digits lost to cancellation
    j = np.arange(1, jmax + 1)
    with np.errstate(divide="ignore"):
        logterm = gammaln(q + 1) - gammaln(j + 1) - gammaln(q - j + 1) + (q - 1) * np.log1p(-j * g)
    dps = int(max(0.0, logterm.max() / np.log(10))) + 30
    with mpmath.workdps(dps):
        gm = mpmath.mpf(g)
        total = mpmath.mpf(0)
        for jj in range(1, jmax + 1):
            term = mpmath.binomial(q, jj) * (1 - jj * gm) ** (q - 1)
            total += term if jj % 2 else -term
        p = float(total)
    return min(1.0, max(0.0, p))


def fisher_test(periodogram_or_series, alpha: float = 0.05) -> TestResult:
    """Fisher's test for a hidden periodicity of unknown frequency.

    Pass the series itself or the output of :func:`fourier_periodogram`;
    padded or windowed periodograms violate the test's assumptions.
    """
    I = _as_ordinates(periodogram_or_series)
    q = I.size
    if q < 4:
        raise InvalidArgumentError("Fisher test needs at least 4 Fourier frequencies")
    total = I.sum()
    if not total > 0:
        raise InvalidArgumentError("periodogram has no power")
    g = float(I.max() / total)
    p = fisher_g_pvalue(g, q)
    return TestResult(g, p, p < alpha)


def ks_white_noise_test(periodogram_or_series, alpha: float = 0.05) -> TestResult:
    """Kolmogorov-Smirnov test of the cumulative periodogram against uniform.

    Under white noise the normalized partial sums ``C_j = sum_{i<=j} I_i / sum I``
    for ``j = 1..q-1`` behave like ``q-1`` ordered uniforms. The p-value uses
    the asymptotic Kolmogorov distribution with Stephens' small-sample
    adjustment of the argument.
    """
    I = _as_ordinates(periodogram_or_series)
    q = I.size
    if q < 4:
        raise InvalidArgumentError("KS test needs at least 4 Fourier frequencies")
    total = I.sum()
    if not total > 0:
        raise InvalidArgumentError("periodogram has no power")
    C = np.cumsum(I)[:-1] / total
    n = q - 1
    i = np.arange(1, n + 1)
    D = float(max(np.max(i / n - C), np.max(C - (i - 1) / n)))
    sn = np.sqrt(n)
    p = float(stats.kstwobign.sf((sn + 0.12 + 0.11 / sn) * D))
    return TestResult(D, p, p < alpha)


def assess(acf: AutocorrFunction, periodogram: Periodogram, series=None, regime: str = "auto",
           confidence: float = 0.95, alpha: float = 0.05) -> SignificanceResult:
    """Pick the regime (automatically unless overridden) and run its tests.

    ``series`` is needed for the white-noise tests, which work on the raw
    Fourier periodogram rather than on ``periodogram``.
    """
    if regime == "auto":
        regime = MARKOV if detect_markov_persistence(acf) else WHITE
    elif regime in ("markov", MARKOV):
        regime = MARKOV
    elif regime in ("white", WHITE):
        regime = WHITE
    else:
        raise InvalidArgumentError(f"unknown regime {regime!r}")
    if regime == MARKOV:
        level = red_noise_level(acf, periodogram, confidence)
        return SignificanceResult(MARKOV, alpha, red_noise_level=level, lag1=float(acf.c[1]))
    if series is None:
        raise InvalidArgumentError("white-noise tests need the series")
    ords = fourier_periodogram(series)
    return SignificanceResult(WHITE, alpha, lag1=float(acf.c[1]),
                              fisher=fisher_test(ords, alpha), ks=ks_white_noise_test(ords, alpha))
