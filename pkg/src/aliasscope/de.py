"""Diagnosis of echo-effect aliases in a Blackman-Tukey raw estimate.

The cosine sum behind the raw estimate at harmonic ``k`` is split over lag
intervals of half a probing period. Interval ``l`` is the open interval
``((2l-1)M/2k, (2l+1)M/2k)`` (the first starts at 0, the last ends at M).
Within each interval the lags are sorted by sign:

* ``A_l``: ``c_tau * cos(pi k tau / M) < 0``
* ``B_l``: ``c_tau < 0`` and ``cos < 0``
* ``C_l``: ``c_tau > 0`` and ``cos > 0``

The cosine keeps the sign ``(-1)^l`` across interval ``l``, so ``C`` sets can
only be nonempty for even ``l`` and ``B`` sets only for odd ``l``. Interval
``l = 2`` is centred on the probing period ``2M/k`` itself.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .autocorr import AutocorrFunction, autocorrelation
from .errors import DegenerateSpectrumError, InvalidArgumentError, NoCandidateSetsError

log = logging.getLogger(__name__)

PEAK_SUPPORTED = "peak_supported"
NOT_TREATABLE = "peak_not_treatable_as_true"

# ds values closer than this (percentage points) are treated as tied; equal
# to the one-decimal precision at which the indices are reported
DEFAULT_TIE_TOLERANCE = 0.1


@dataclass(frozen=True)
class LagPartition:
    k: int
    M: int
    A: dict
    B: dict
    C: dict

    @property
    def I_A(self):
        return tuple(i for i, s in self.A.items() if s)

    @property
    def I_B(self):
        return tuple(j for j, s in self.B.items() if s)

    @property
    def I_C(self):
        return tuple(l for l, s in self.C.items() if s)

    def interval(self, l: int) -> tuple:
        """Open real interval of lags searched for index ``l``."""
        lo = max(0.0, (2 * l - 1) * self.M / (2 * self.k))
        hi = min(float(self.M), (2 * l + 1) * self.M / (2 * self.k))
        return lo, hi

    @property
    def period(self) -> int:
        return (2 * self.M) // self.k


def interval_index(tau, k: int, M: int) -> np.ndarray:
    """Index ``l`` of the open interval containing each lag, or -1 on a boundary.

    Uses exact integer arithmetic: ``(2l-1)M < 2k tau < (2l+1)M``.
    """
    tau = np.asarray(tau, dtype=np.int64)
    t2 = 2 * k * tau
    l = (t2 + M) // (2 * M)
    on_boundary = (t2 + M) % (2 * M) == 0
    return np.where(on_boundary, -1, l)


def partition_lags(acf: AutocorrFunction, k: int) -> LagPartition:
    """Assign lags ``1..M-1`` to the sets A, B and C.

    Lags on an interval boundary (possible when ``M/2k`` divides evenly)
    have a zero cosine and stay unassigned, as do lags with ``c_tau = 0``.
    Lag ``M`` lies outside every interval because the last one is open at
    ``M``; its contribution is the separate ``(-1)^k c_M / M`` term.
    """
    M = acf.M
    if not 1 <= k <= M:
        raise InvalidArgumentError(f"k={k} outside 1..{M}")
    tau = np.arange(1, M)
    idx = interval_index(tau, k, M)
    c = acf.c[1:M]
    cs = np.cos(np.pi * k * tau / M)
    # sign of the cosine is fixed by the interval; avoids rounding noise near zeros
    cos_sign = np.where(idx % 2 == 0, 1, -1)
    c_sign = np.sign(c)
    inside = (idx >= 0) & (cs != 0)
    A = {i: [] for i in range(k + 1)}
    B = {i: [] for i in range(k + 1)}
    C = {i: [] for i in range(k + 1)}
    for t, l, sc, sk in zip(tau[inside], idx[inside], c_sign[inside], cos_sign[inside]):
        if sc == 0:
            continue
        if sc * sk < 0:
            A[int(l)].append(int(t))
        elif sc < 0:
            B[int(l)].append(int(t))
        else:
            C[int(l)].append(int(t))
    freeze = lambda d: {key: tuple(v) for key, v in d.items()}
    return LagPartition(k, M, freeze(A), freeze(B), freeze(C))


@dataclass(frozen=True)
class DsIndices:
    """Percent shares of the positive part of the cosine sum.

    ``ws_plus[l]`` sums ``c_tau cos(pi k tau/M)`` over ``C_l`` and
    ``ws_minus[j]`` over ``B_j`` (both products positive). ``ds_*`` are the
    same sums as percentages of ``ws``.
    """

    ws_plus: dict
    ws_minus: dict
    ws: float
    ds_plus: dict
    ds_minus: dict
    ds_plus_total: float
    ds_minus_total: float
    ws_negative: float = 0.0


def ds_indices(partition: LagPartition, acf: AutocorrFunction) -> DsIndices:
    if acf.M != partition.M:
        raise InvalidArgumentError("partition and autocorrelation disagree on M")
    k, M = partition.k, partition.M

    def wsum(lags):
        if not lags:
            return 0.0
        t = np.asarray(lags)
        return float(np.sum(acf.c[t] * np.cos(np.pi * k * t / M)))

    ws_plus = {l: wsum(s) for l, s in partition.C.items()}
    ws_minus = {j: wsum(s) for j, s in partition.B.items()}
    ws_neg = sum(wsum(s) for s in partition.A.values())
    ws = sum(ws_minus.values()) + sum(ws_plus.values())
    if not ws > 0:
        raise DegenerateSpectrumError(f"no positive contributions at k={k}")
    ds_plus = {l: 100.0 * v / ws for l, v in ws_plus.items()}
    ds_minus = {j: 100.0 * v / ws for j, v in ws_minus.items()}
    return DsIndices(
        ws_plus=ws_plus,
        ws_minus=ws_minus,
        ws=ws,
        ds_plus=ds_plus,
        ds_minus=ds_minus,
        ds_plus_total=sum(ds_plus.values()),
        ds_minus_total=sum(ds_minus.values()),
        ws_negative=ws_neg,
    )


@dataclass(frozen=True)
class Condition7:
    ds_plus_total: float
    margin: float
    passed: bool


@dataclass(frozen=True)
class Condition8:
    m: int
    ds_plus_at_m: float
    interval: tuple
    lag_range: tuple
    contains_period: bool
    passed: bool
    tie: bool
    tied: tuple


@dataclass(frozen=True)
class DeReport:
    k: int
    M: int
    period: int
    condition7: Condition7
    condition8: Condition8
    excluded_sets: tuple
    verdict: str
    partition: Optional[LagPartition] = field(default=None, repr=False)
    ds: Optional[DsIndices] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        """JSON-ready summary. ``ds_plus`` lists only the nonempty C sets."""
        c8 = self.condition8
        out = {
            "k": self.k,
            "M": self.M,
            "period": self.period,
            "condition7": {
                "ds_plus_total": self.condition7.ds_plus_total,
                "margin": self.condition7.margin,
                "passed": self.condition7.passed,
            },
            "condition8": {
                "m": c8.m,
                "ds_plus_at_m": c8.ds_plus_at_m,
                "interval": list(c8.interval),
                "lag_range": list(c8.lag_range),
                "contains_period": c8.contains_period,
                "passed": c8.passed,
                "tie": c8.tie,
                "tied": list(c8.tied),
            },
            "excluded_sets": list(self.excluded_sets),
            "verdict": self.verdict,
        }
        if self.ds is not None and self.partition is not None:
            out["ds_plus"] = {str(l): self.ds.ds_plus[l] for l in self.partition.I_C}
            out["ds_minus"] = {str(j): self.ds.ds_minus[j] for j in self.partition.I_B}
            out["ds_minus_total"] = self.ds.ds_minus_total
        return out


def evaluate_conditions(
    ds: DsIndices,
    partition: LagPartition,
    exclude: Iterable[int] = (),
    tie_tolerance: float = DEFAULT_TIE_TOLERANCE,
) -> DeReport:
    """Check both conditions and render a verdict.

    ``condition7``: ``2 * ds_plus_total - 100 > 0``.

    ``condition8``: among the nonempty C sets not in ``exclude``, take those
    whose ``ds_plus`` is within ``tie_tolerance`` percentage points of the
    largest. The condition holds if one of them contains the lag
    ``[2M/k]``. The reported ``m`` is that set, or else the smallest tied
    index. Exclusions naming empty sets are ignored.
    """
    k, M = partition.k, partition.M
    period = partition.period
    excluded = tuple(sorted(set(exclude) & set(partition.I_C)))
    candidates = [l for l in partition.I_C if l not in excluded]
    if not candidates:
        raise NoCandidateSetsError(f"no nonempty C sets left at k={k} after excluding {excluded}")

    margin = 2.0 * ds.ds_plus_total - 100.0
    c7 = Condition7(ds.ds_plus_total, margin, margin > 0)

    best = max(ds.ds_plus[l] for l in candidates)
    tied = tuple(l for l in candidates if ds.ds_plus[l] >= best - tie_tolerance)
    holding = [l for l in tied if period in partition.C[l]]
    m = holding[0] if holding else tied[0]
    lags = partition.C[m]
    c8 = Condition8(
        m=m,
        ds_plus_at_m=ds.ds_plus[m],
        interval=partition.interval(m),
        lag_range=(min(lags), max(lags)),
        contains_period=bool(holding),
        passed=bool(holding),
        tie=len(tied) > 1,
        tied=tied,
    )
    verdict = PEAK_SUPPORTED if (c7.passed and c8.passed) else NOT_TREATABLE
    return DeReport(k, M, period, c7, c8, excluded, verdict, partition, ds)


def diagnose_acf(acf: AutocorrFunction, k: int, exclude: Iterable[int] = (),
                 tie_tolerance: float = DEFAULT_TIE_TOLERANCE) -> DeReport:
    part = partition_lags(acf, k)
    return evaluate_conditions(ds_indices(part, acf), part, exclude, tie_tolerance)


def diagnose_peak(series, M: int, k: int, exclude: Iterable[int] = (),
                  tie_tolerance: float = DEFAULT_TIE_TOLERANCE) -> DeReport:
    """Autocorrelation, lag partition, ds indices and verdict for one bin."""
    return diagnose_acf(autocorrelation(series, M), k, exclude, tie_tolerance)
