"""Series containers, running-mean detrending, rotation means and test signals."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from .errors import InsufficientPaddingError, InvalidArgumentError

log = logging.getLogger(__name__)

CARRINGTON_SYNODIC_DAYS = 27.2753


class Spacing(str, enum.Enum):
    DAY = "day"
    ROTATION = "rotation"
    MONTH = "month"


# 13-point mean for rotation/month data, 365-point mean for daily data
DEFAULT_WINDOW = {Spacing.DAY: 365, Spacing.ROTATION: 13, Spacing.MONTH: 13}


def _as_float_array(values, name):
    arr = np.asarray(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled series.

    ``pad_before``/``pad_after`` hold real adjacent data used only at the
    edges of a running mean; they are never part of ``values``.
    """

    values: np.ndarray
    spacing: Spacing = Spacing.DAY
    start_label: int = 0
    pad_before: Optional[np.ndarray] = None
    pad_after: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "values", _as_float_array(self.values, "values"))
        if self.values.size == 0:
            raise InvalidArgumentError("series must be nonempty")
        object.__setattr__(self, "spacing", Spacing(self.spacing))
        object.__setattr__(self, "start_label", int(self.start_label))
        for name in ("pad_before", "pad_after"):
            pad = getattr(self, name)
            if pad is not None:
                object.__setattr__(self, name, _as_float_array(pad, name))

    def __len__(self):
        return self.values.size

    @property
    def labels(self) -> np.ndarray:
        return self.start_label + np.arange(self.values.size)


@dataclass(frozen=True)
class FluctuationSeries:
    """A series with its centred running mean removed."""

    values: np.ndarray
    source_window: int
    spacing: Spacing = Spacing.DAY
    start_label: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", _as_float_array(self.values, "values"))
        if self.values.size == 0:
            raise InvalidArgumentError("series must be nonempty")
        object.__setattr__(self, "spacing", Spacing(self.spacing))

    def __len__(self):
        return self.values.size

    @property
    def labels(self) -> np.ndarray:
        return self.start_label + np.arange(self.values.size)


def values_of(series) -> np.ndarray:
    """Return the sample values of a TimeSeries, FluctuationSeries or array."""
    if isinstance(series, (TimeSeries, FluctuationSeries)):
        return series.values
    return _as_float_array(series, "series")


def _check_window(window):
    if int(window) != window or window < 1 or window % 2 == 0:
        raise InvalidArgumentError(f"window must be an odd positive integer, got {window!r}")
    return int(window)


def running_mean(series: TimeSeries, window: int, truncate: bool = False) -> TimeSeries:
    """Centred moving average of odd length ``window``.

    Edge values use the series' pad samples. With ``truncate=True`` and no
    pads, the output instead covers only the points whose full window lies
    inside the series (length N - window + 1, start label shifted by the
    half-window).
    """
    window = _check_window(window)
    half = (window - 1) // 2
    x = series.values
    before = series.pad_before if series.pad_before is not None else np.empty(0)
    after = series.pad_after if series.pad_after is not None else np.empty(0)
    if before.size >= half and after.size >= half:
        ext = np.concatenate([before[before.size - half:], x, after[:half]])
        start = series.start_label
    elif truncate:
        if x.size < window:
            raise InvalidArgumentError(f"series of length {x.size} is shorter than window {window}")
        ext = x
        start = series.start_label + half
    else:
        raise InsufficientPaddingError(
            f"window {window} needs {half} pad samples on each side, got "
            f"{before.size} before and {after.size} after; pass truncate=True to shorten instead"
        )
    mean = np.convolve(ext, np.ones(window), mode="valid") / window
    return TimeSeries(mean, series.spacing, start)


def detrend(series: TimeSeries, window: Optional[int] = None, truncate: bool = False) -> FluctuationSeries:
    """Subtract the centred running mean from ``series``."""
    if window is None:
        window = DEFAULT_WINDOW[series.spacing]
    smooth = running_mean(series, window, truncate=truncate)
    offset = smooth.start_label - series.start_label
    x = series.values[offset:offset + len(smooth)]
    return FluctuationSeries(x - smooth.values, window, series.spacing, smooth.start_label)


def aggregate_to_rotation(daily: TimeSeries, rotation_length_days: float = CARRINGTON_SYNODIC_DAYS) -> TimeSeries:
    """Average daily values over fixed-length rotation blocks.

    Day ``i`` (counted from the start of the series) belongs to block
    ``floor(i / L)``. Only complete blocks are returned.
    """
    if daily.spacing != Spacing.DAY:
        raise InvalidArgumentError("aggregate_to_rotation needs a daily series")
    L = float(rotation_length_days)
    if not L > 0:
        raise InvalidArgumentError("rotation length must be positive")
    n_full = int(np.floor(len(daily) / L))
    if n_full == 0:
        raise InvalidArgumentError("series shorter than one rotation")
    block = np.floor(np.arange(len(daily)) / L).astype(int)
    keep = block < n_full
    sums = np.bincount(block[keep], weights=daily.values[keep], minlength=n_full)
    counts = np.bincount(block[keep], minlength=n_full)
    if np.any(counts == 0):
        raise RuntimeError("empty rotation block")
    return TimeSeries(sums / counts, Spacing.ROTATION, 0)


@dataclass
class Sinusoid:
    period: float
    amplitude: float = 1.0
    phase: float = 0.0


@dataclass
class SignalSpec:
    """Recipe for a synthetic test signal.

    ``noise_sigma`` is the innovation standard deviation of the AR(1) noise
    ``e_t = ar_coef * e_{t-1} + noise_sigma * w_t``; the recursion starts
    from its stationary distribution. ``trend`` holds polynomial
    coefficients in ascending order (constant, linear, quadratic) in units of
    samples.
    """

    n: int
    components: list = field(default_factory=list)
    ar_coef: float = 0.0
    noise_sigma: float = 0.0
    trend: Sequence[float] = ()
    seed: int = 0
    spacing: Spacing = Spacing.DAY

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        comps = [c if isinstance(c, Sinusoid) else Sinusoid(**c) for c in d.pop("components", [])]
        unknown = set(d) - {"n", "ar_coef", "noise_sigma", "trend", "seed", "spacing"}
        if unknown:
            raise InvalidArgumentError(f"unknown signal spec keys: {sorted(unknown)}")
        return cls(components=comps, **d)


def ar1_noise(n: int, coef: float, sigma: float, rng: np.random.Generator) -> np.ndarray:
    if not 0.0 <= coef < 1.0:
        raise InvalidArgumentError(f"AR(1) coefficient must lie in [0, 1), got {coef}")
    w = rng.standard_normal(n) * sigma
    w[0] /= np.sqrt(1.0 - coef * coef)
    return lfilter([1.0], [1.0, -coef], w)


def synthesize(spec: SignalSpec) -> TimeSeries:
    """Deterministic sum of sinusoids, AR(1) noise and a polynomial trend."""
    if spec.n < 1:
        raise InvalidArgumentError("n must be positive")
    t = np.arange(spec.n, dtype=float)
    x = np.zeros(spec.n)
    for c in spec.components:
        if not c.period > 0:
            raise InvalidArgumentError(f"sinusoid period must be positive, got {c.period}")
        x += c.amplitude * np.cos(2.0 * np.pi * t / c.period + c.phase)
    for power, coef in enumerate(spec.trend):
        x += coef * t ** power
    if spec.noise_sigma:
        rng = np.random.default_rng(spec.seed)
        x += ar1_noise(spec.n, spec.ar_coef, spec.noise_sigma, rng)
    return TimeSeries(x, spec.spacing, 0)
