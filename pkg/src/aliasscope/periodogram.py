"""Blackman-Tukey and FFT periodograms, and lag-cutoff selection by agreement."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .autocorr import AutocorrFunction, autocorrelation
from .errors import InvalidArgumentError
from .timeseries import values_of

log = logging.getLogger(__name__)

BT_RAW = "bt_raw"
BT_SMOOTHED = "bt_smoothed"
FFT = "fft"


@dataclass(frozen=True)
class Periodogram:
    """Spectral estimates on a grid of frequencies (cycles per sample).

    For BT estimates ``k`` holds the harmonic index, ``frequency = k / 2M``
    and ``period`` is the integer period ``floor(2M / k)``. For FFT estimates
    ``period = 1 / frequency`` (real valued) and ``k`` is the FFT bin.
    """

    method: str
    values: np.ndarray
    frequency: np.ndarray
    period: np.ndarray
    k: np.ndarray
    M: Optional[int] = None
    window_name: Optional[str] = None
    n_samples: Optional[int] = None

    def mean_power(self) -> float:
        return float(np.mean(self.values))


def bt_period(M: int, k) -> np.ndarray:
    """Integer period ``[2M/k]`` of BT bin ``k``."""
    return (2 * int(M)) // np.asarray(k)


def bt_raw(acf: AutocorrFunction, k: int) -> float:
    """Raw BT estimate at harmonic ``k`` (``1 <= k <= M``).

    ``c_0/M + (-1)^k c_M/M + (2/M) sum_{tau=1}^{M-1} c_tau cos(pi k tau / M)``
    """
    M = acf.M
    if not 1 <= k <= M:
        raise InvalidArgumentError(f"k={k} outside 1..{M}")
    c = acf.c
    tau = np.arange(1, M)
    sign = 1.0 if k % 2 == 0 else -1.0
    return float(c[0] / M + sign * c[M] / M + (2.0 / M) * np.dot(np.cos(np.pi * k * tau / M), c[1:M]))


def bt_raw_all(acf: AutocorrFunction) -> np.ndarray:
    """Raw BT estimates for ``k = 0..M`` (index 0 is the zero-frequency term)."""
    M = acf.M
    c = acf.c
    k = np.arange(M + 1)
    tau = np.arange(1, M)
    cosines = np.cos(np.pi * np.outer(k, tau) / M)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    return c[0] / M + sign * c[M] / M + (2.0 / M) * (cosines @ c[1:M])


def bt_smoothed(raw: Sequence[float]) -> np.ndarray:
    """Three-point Hanning smoothing (0.25, 0.5, 0.25).

    The two end points use (0.5, 0.5) with their single neighbour.
    """
    v = np.asarray(raw, dtype=float)
    if v.size < 3:
        raise InvalidArgumentError("need at least 3 estimates to smooth")
    out = np.empty_like(v)
    out[1:-1] = 0.25 * v[:-2] + 0.5 * v[1:-1] + 0.25 * v[2:]
    out[0] = 0.5 * (v[0] + v[1])
    out[-1] = 0.5 * (v[-1] + v[-2])
    return out


def bt_periodogram(acf: AutocorrFunction, smoothed: bool = True) -> Periodogram:
    """BT periodogram for ``k = 1..M``.

    Smoothing runs over ``k = 0..M`` so that the ``k = 1`` estimate sees its
    lower neighbour; the ``k = 0`` term is then dropped.
    """
    M = acf.M
    raw = bt_raw_all(acf)
    vals = bt_smoothed(raw) if smoothed else raw
    k = np.arange(1, M + 1)
    return Periodogram(
        method=BT_SMOOTHED if smoothed else BT_RAW,
        values=vals[1:],
        frequency=k / (2.0 * M),
        period=bt_period(M, k),
        k=k,
        M=M,
        n_samples=acf.n_samples,
    )


def _next_pow2(n):
    return 1 << (int(n) - 1).bit_length()


def fft_periodogram(series, window: str = "hamming", pad_to: Optional[int] = None) -> Periodogram:
    """One-sided FFT periodogram of the mean-removed, windowed series.

    Normalization follows Parseval: summed over all one-sided bins
    (including the zero-frequency bin, which is not reported) the power
    equals ``sum((w * (x - mean))**2)``. By default the series is zero-padded
    to the next power of two at or above ``4N``.
    """
    x = values_of(series)
    n = x.size
    if n < 8:
        raise InvalidArgumentError("FFT periodogram needs N >= 8")
    if window == "hamming":
        w = np.hamming(n)
    elif window in ("none", None):
        w = np.ones(n)
        window = "none"
    else:
        raise InvalidArgumentError(f"unknown window {window!r}")
    L = _next_pow2(4 * n) if pad_to is None else int(pad_to)
    if L < n:
        raise InvalidArgumentError(f"pad_to={L} is shorter than the series ({n})")
    y = (x - x.mean()) * w
    power = one_sided_power(y, L)
    j = np.arange(1, power.size)
    freq = j / L
    return Periodogram(
        method=FFT,
        values=power[1:],
        frequency=freq,
        period=1.0 / freq,
        k=j,
        window_name=window,
        n_samples=n,
    )


def one_sided_power(y, L):
    """Parseval-normalized one-sided power of ``y`` zero-padded to ``L``, bins 0..L//2."""
    X = np.fft.rfft(y, L)
    p = np.abs(X) ** 2 / L
    if L % 2 == 0:
        p[1:-1] *= 2.0
    else:
        p[1:] *= 2.0
    return p


@dataclass(frozen=True)
class MSelection:
    M: int
    scores: dict
    low_conformity: bool
    threshold: float


# spectra are compared within this many decades below their own maximum
CONFORMITY_DYNAMIC_RANGE = 3.0


def fft_on_bt_grid(fft: Periodogram, M: int) -> np.ndarray:
    """FFT power brought to BT resolution for ``k = 0..M``.

    The power is averaged over each band ``[(k - 1/2)/2M, (k + 1/2)/2M)`` and
    then passed through the same 3-point smoothing as the BT estimate.
    """
    k = np.arange(M + 1)
    lo = np.maximum((k - 0.5) / (2.0 * M), 0.0)
    hi = (k + 0.5) / (2.0 * M)
    cum = np.concatenate([[0.0], np.cumsum(fft.values)])
    i_lo = np.searchsorted(fft.frequency, lo)
    i_hi = np.searchsorted(fft.frequency, hi)
    counts = i_hi - i_lo
    band = np.interp(k / (2.0 * M), fft.frequency, fft.values)
    full = counts > 0
    band[full] = (cum[i_hi[full]] - cum[i_lo[full]]) / counts[full]
    return bt_smoothed(band)


def conformity(bt: Periodogram, fft: Periodogram, period_cap: float,
               dynamic_range: float = CONFORMITY_DYNAMIC_RANGE) -> float:
    """Pearson correlation of log power between a smoothed BT and an FFT periodogram.

    Only BT bins with period below ``period_cap`` enter. Each spectrum is
    floored at ``10**-dynamic_range`` times its own maximum over those bins
    so that leakage far below the peaks does not dominate the score.
    """
    sel = bt.period < period_cap
    if np.count_nonzero(sel) < 3:
        raise InvalidArgumentError(f"fewer than 3 BT bins with period < {period_cap}")
    a = np.asarray(bt.values[sel], dtype=float)
    b = fft_on_bt_grid(fft, bt.M)[bt.k[sel]]
    if not (a.max() > 0 and b.max() > 0):
        return 0.0
    la = np.log10(np.maximum(a, a.max() * 10.0 ** -dynamic_range))
    lb = np.log10(np.maximum(b, b.max() * 10.0 ** -dynamic_range))
    if np.std(la) == 0 or np.std(lb) == 0:
        return 0.0
    return float(np.corrcoef(la, lb)[0, 1])


def choose_M(series, candidates: Sequence[int], period_cap: float, threshold: float = 0.9) -> MSelection:
    """Pick the lag cutoff whose smoothed BT periodogram best matches the FFT one.

    Returns the smallest candidate whose conformity exceeds ``threshold``.
    If none does, the best-scoring candidate is returned with
    ``low_conformity=True``.
    """
    cands = sorted({int(m) for m in candidates})
    if not cands:
        raise InvalidArgumentError("empty candidate list")
    fft = fft_periodogram(series)
    scores = {}
    for M in cands:
        acf = autocorrelation(series, M)
        scores[M] = conformity(bt_periodogram(acf, smoothed=True), fft, period_cap)
        log.info("M=%d conformity %.3f", M, scores[M])
    passing = [M for M in cands if scores[M] > threshold]
    if passing:
        return MSelection(passing[0], scores, False, threshold)
    best = max(cands, key=lambda m: scores[m])
    log.warning("no candidate M reaches conformity %.2f; using best M=%d", threshold, best)
    return MSelection(best, scores, True, threshold)
