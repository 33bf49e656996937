"""Strong-fluctuation maxima in the maximum-activity interval and their spacings."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateIntervalError, InvalidArgumentError, NotAchievableError
from .timeseries import FluctuationSeries

log = logging.getLogger(__name__)


def _values_and_labels(fluct):
    if isinstance(fluct, FluctuationSeries):
        return fluct.values, fluct.labels
    v = np.asarray(fluct, dtype=float)
    return v, np.arange(v.size)


@dataclass(frozen=True)
class Interval:
    start: int
    end: int
    narrow: bool = False

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def find_max_activity_interval(fluct) -> Interval:
    """Closed interval between the two largest fluctuations (labels, ties earliest).

    ``narrow`` flags the case where the two positions are adjacent.
    """
    v, labels = _values_and_labels(fluct)
    if v.size < 3:
        raise InvalidArgumentError("need at least 3 samples")
    if np.ptp(v) == 0:
        raise DegenerateIntervalError("constant series has no strongest fluctuations")
    order = np.argsort(-v, kind="stable")
    i1, i2 = sorted(order[:2])
    narrow = i2 - i1 == 1
    if narrow:
        log.warning("maximum-activity interval has width 1 (positions %d, %d)", labels[i1], labels[i2])
    return Interval(int(labels[i1]), int(labels[i2]), bool(narrow))


def local_maxima(values, p: float) -> np.ndarray:
    """Indices of local maxima among the samples exceeding ``p``.

    Sample ``i`` counts when ``values[i] > p`` and it is higher than the
    neighbouring samples on both sides (a missing neighbour does not count
    against it). For a flat top the leftmost sample is taken.
    """
    v = np.asarray(values, dtype=float)
    out = []
    n = v.size
    i = 0
    while i < n:
        j = i
        while j + 1 < n and v[j + 1] == v[i]:
            j += 1
        left_ok = i == 0 or v[i - 1] < v[i]
        right_ok = j == n - 1 or v[j + 1] < v[i]
        if v[i] > p and left_ok and right_ok:
            out.append(i)
        i = j + 1
    return np.asarray(out, dtype=int)


@dataclass(frozen=True)
class ThresholdScan:
    p: float
    p_upper: float
    positions: np.ndarray
    trace: tuple


def _restrict(fluct, interval):
    v, labels = _values_and_labels(fluct)
    sel = (labels >= interval.start) & (labels <= interval.end)
    return v[sel], labels[sel]


def threshold_scan(fluct, interval: Interval, target_count: int) -> ThresholdScan:
    """Largest threshold at which exactly ``target_count`` maxima exceed it in J.

    Thresholds are the distinct values inside J, swept downwards. Any
    threshold in ``[p, p_upper)`` gives the same maxima. ``trace`` holds
    every ``(p, count)`` visited.
    """
    if target_count < 1:
        raise InvalidArgumentError("target_count must be at least 1")
    v, labels = _restrict(fluct, interval)
    if v.size == 0:
        raise InvalidArgumentError("interval contains no samples")
    levels = np.unique(v)[::-1]
    trace = []
    for idx, p in enumerate(levels):
        found = local_maxima(v, p)
        trace.append((float(p), int(found.size)))
        if found.size == target_count:
            upper = float(levels[idx - 1]) if idx > 0 else float(p)
            return ThresholdScan(float(p), upper, labels[found], tuple(trace))
    counts = sorted({c for _, c in trace})
    raise NotAchievableError(
        f"no threshold gives {target_count} maxima; achievable counts: {counts}", counts
    )


@dataclass(frozen=True)
class MaximaReport:
    interval: Optional[Interval]
    p: Optional[float]
    maxima_positions: np.ndarray
    distances: np.ndarray
    candidate_period: float
    dispersion: float
    exact_matches: int
    near_matches: int

    def to_dict(self) -> dict:
        return {
            "interval": None if self.interval is None else [self.interval.start, self.interval.end],
            "p": self.p,
            "maxima_positions": [int(x) for x in self.maxima_positions],
            "distances": [int(x) for x in self.distances],
            "candidate_period": self.candidate_period,
            "dispersion": self.dispersion,
            "exact_matches": self.exact_matches,
            "near_matches": self.near_matches,
        }


def spacing_report(maxima, candidate_period: float, interval: Optional[Interval] = None,
                   p: Optional[float] = None) -> MaximaReport:
    """Distances between successive maxima compared with ``candidate_period``.

    ``near_matches`` counts distances within one sample of the period.
    """
    pos = np.sort(np.asarray(maxima, dtype=int))
    if pos.size < 2:
        raise InvalidArgumentError("need at least 2 maxima")
    d = np.diff(pos)
    return MaximaReport(
        interval=interval,
        p=p,
        maxima_positions=pos,
        distances=d,
        candidate_period=float(candidate_period),
        dispersion=float(d.max() - d.min()),
        exact_matches=int(np.sum(d == candidate_period)),
        near_matches=int(np.sum(np.abs(d - candidate_period) <= 1)),
    )


def analyse_maxima(fluct, target_count: int, candidate_period: float) -> MaximaReport:
    J = find_max_activity_interval(fluct)
    scan = threshold_scan(fluct, J, target_count)
    return spacing_report(scan.positions, candidate_period, J, scan.p)
