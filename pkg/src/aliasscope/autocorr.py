"""Normalized sample autocorrelation and its standard-error band."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeriesError, InvalidArgumentError
from .timeseries import values_of

BARTLETT = "bartlett"
CONSTANT = "constant"


@dataclass(frozen=True)
class AutocorrFunction:
    """Autocorrelation ``c[tau]`` for ``tau = 0..M`` of a series of length N.

    ``se[tau - 1]`` is the standard error at lag ``tau`` (``tau = 1..M``).
    """

    c: np.ndarray
    M: int
    n_samples: int
    se: np.ndarray
    se_method: str = BARTLETT

    def band(self) -> np.ndarray:
        """Two-standard-error band for lags 1..M."""
        return 2.0 * self.se


def _lagged_products(x, M):
    out = np.empty(M + 1)
    n = x.size
    for tau in range(M + 1):
        out[tau] = np.dot(x[: n - tau], x[tau:]) / (n - tau)
    return out


def autocorrelation(series, M: int, se_method: str = BARTLETT) -> AutocorrFunction:
    """Sample autocorrelation with ``1/(N - tau)`` lag normalization.

    The mean is removed once over the whole series; each lagged sum is
    divided by its own number of terms and then by the biased variance
    ``(1/N) sum (x - mean)^2``. This is not the positive-definite ``1/N``
    estimator, so ``|c_tau|`` can slightly exceed 1 for very short overlaps.

    Parameters
    ----------
    series : TimeSeries, FluctuationSeries or array_like
    M : int
        Largest lag, ``1 <= M < N``. ``M < N/3`` is recommended.
    se_method : {"bartlett", "constant"}
        Standard-error rule, see :func:`autocorr_standard_errors`.
    """
    x = values_of(series)
    n = x.size
    M = int(M)
    if M < 1 or M >= n:
        raise InvalidArgumentError(f"need 1 <= M < N, got M={M}, N={n}")
    if 3 * M >= n:
        warnings.warn(f"M={M} is not below N/3={n / 3:.1f}; long-lag estimates will be noisy", stacklevel=2)
    xc = x - x.mean()
    var = np.dot(xc, xc) / n
    if not var > 0:
        raise DegenerateSeriesError("series has zero variance")
    c = _lagged_products(xc, M) / var
    c[0] = 1.0
    acf = AutocorrFunction(c, M, n, np.empty(0), se_method)
    return AutocorrFunction(c, M, n, autocorr_standard_errors(acf, se_method), se_method)


def autocorr_standard_errors(acf: AutocorrFunction, method: str = BARTLETT) -> np.ndarray:
    """Standard errors for lags ``1..M``.

    ``"bartlett"``: ``sqrt((1 + 2 sum_{u<tau} c_u^2) / N)``.
    ``"constant"``: ``1/sqrt(N)`` at every lag.
    """
    n = acf.n_samples
    if method == CONSTANT:
        return np.full(acf.M, 1.0 / np.sqrt(n))
    if method != BARTLETT:
        raise InvalidArgumentError(f"unknown standard-error method {method!r}")
    sq = acf.c[1:acf.M] ** 2
    inner = np.concatenate([[0.0], np.cumsum(sq)])
    return np.sqrt((1.0 + 2.0 * inner) / n)


def is_significantly_positive(acf: AutocorrFunction, tau: int) -> bool:
    if not 1 <= tau <= acf.M:
        raise InvalidArgumentError(f"lag {tau} outside 1..{acf.M}")
    return bool(acf.c[tau] > 2.0 * acf.se[tau - 1])
