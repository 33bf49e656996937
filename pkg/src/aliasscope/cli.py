"""Command-line front end.

Subcommands ``acf``, ``spectrum``, ``diagnose``, ``maxima`` and ``synth``
read a CSV series (see :mod:`aliasscope.io`) and write CSV/JSON files into
``--out``. Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical
degeneracy. Set ``ALIAS_SCOPE_LOG`` (e.g. ``INFO``) for log output.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import io as aio
from .autocorr import autocorrelation
from .de import DEFAULT_TIE_TOLERANCE, diagnose_acf
from .errors import DataError, DegeneracyError
from .maxima import analyse_maxima
from .periodogram import bt_periodogram, choose_M, fft_periodogram
from .significance import MARKOV, assess
from .timeseries import FluctuationSeries, SignalSpec, Spacing, detrend, synthesize

log = logging.getLogger("aliasscope")

EXIT_USAGE, EXIT_DATA, EXIT_DEGENERATE = 2, 3, 4


class UsageError(Exception):
    """Inconsistent command-line options (exit code 2)."""


@dataclass
class AnalysisConfig:
    input: Optional[str] = None
    spacing: str = "day"
    window: Optional[int] = None
    truncate: bool = False
    pad_before: Optional[str] = None
    pad_after: Optional[str] = None
    M: list = field(default_factory=list)
    period_cap: Optional[float] = None
    k: list = field(default_factory=list)
    periods: list = field(default_factory=list)
    exclude_c: list = field(default_factory=list)
    confidence: float = 0.95
    alpha: float = 0.05
    regime: str = "auto"
    seed: Optional[int] = None
    tie_tolerance: float = DEFAULT_TIE_TOLERANCE
    gate: bool = True
    target_count: int = 10
    candidate_period: float = 6.0
    out: str = "."

    def resolve_k(self, M: int) -> list:
        """Requested k values, with periods converted by ``k = round(2M/period)``."""
        ks = list(self.k)
        for p in self.periods:
            k = int(round(2 * M / p))
            log.info("period %g -> k=%d (BT period [2M/k]=%d)", p, k, (2 * M) // max(k, 1))
            ks.append(k)
        ks = sorted(set(ks))
        for k in ks:
            if not 1 <= k <= M:
                raise UsageError(f"k={k} outside 1..{M}")
        return ks


def _int_list(s):
    return [int(v) for v in s.split(",") if v.strip()]


def _float_list(s):
    return [float(v) for v in s.split(",") if v.strip()]


def load_series(cfg: AnalysisConfig):
    """Read the input and detrend it when a window is configured."""
    ts = aio.read_series(cfg.input, Spacing(cfg.spacing), cfg.pad_before, cfg.pad_after)
    if cfg.window is None:
        return FluctuationSeries(ts.values, 0, ts.spacing, ts.start_label)
    return detrend(ts, cfg.window, truncate=cfg.truncate)


def _pick_M(cfg, series):
    if not cfg.M:
        raise UsageError("--M is required")
    if len(cfg.M) == 1:
        return cfg.M[0], None
    cap = cfg.period_cap if cfg.period_cap is not None else len(series) / 6.0
    sel = choose_M(series, cfg.M, cap)
    for M, score in sorted(sel.scores.items()):
        print(f"M={M} conformity={score:.4f}")
    log.info("chosen M=%d%s", sel.M, " (low conformity)" if sel.low_conformity else "")
    return sel.M, sel


def cmd_acf(cfg: AnalysisConfig):
    series = load_series(cfg)
    M = cfg.M[0] if cfg.M else (len(series) - 1) // 3
    acf = autocorrelation(series, M)
    band = np.concatenate([[np.nan], acf.band()])
    tau = np.arange(M + 1)
    aio.write_csv(Path(cfg.out) / "acf.csv", ["tau", "c", "minus_2se", "plus_2se"],
                  [tau, acf.c, -band, band])
    return acf


def _spectra(cfg, series):
    M, sel = _pick_M(cfg, series)
    acf = autocorrelation(series, M)
    fft = fft_periodogram(series)
    sig = assess(acf, fft, series, cfg.regime, cfg.confidence, cfg.alpha)
    return M, sel, acf, fft, sig


def cmd_spectrum(cfg: AnalysisConfig):
    series = load_series(cfg)
    M, sel, acf, fft, sig = _spectra(cfg, series)
    out = Path(cfg.out)
    raw = bt_periodogram(acf, smoothed=False)
    smooth = bt_periodogram(acf, smoothed=True)
    aio.write_csv(out / "fft.csv", ["period", "power"], [fft.period, fft.values])
    aio.write_csv(out / "bt_raw.csv", ["k", "period", "power"], [raw.k, raw.period, raw.values])
    aio.write_csv(out / "bt_smoothed.csv", ["k", "period", "power"], [smooth.k, smooth.period, smooth.values])
    level = sig.red_noise_level if sig.regime == MARKOV else np.full(fft.values.size, np.nan)
    aio.write_csv(out / "significance.csv", ["period", "power", "level"], [fft.period, fft.values, level])
    aio.write_json(out / "significance.json", _significance_dict(sig, M, sel))
    return sig


def _significance_dict(sig, M, sel):
    d = {"regime": sig.regime, "alpha": sig.alpha, "lag1": sig.lag1, "M": M}
    for name in ("fisher", "ks"):
        t = getattr(sig, name)
        if t is not None:
            d[name] = {"statistic": t.statistic, "p_value": t.p_value, "reject": bool(t.reject)}
    if sel is not None:
        d["conformity"] = {str(m): s for m, s in sorted(sel.scores.items())}
        d["low_conformity"] = sel.low_conformity
    return d


def _bin_significance(sig, fft, k, M):
    """Whether any FFT bin inside BT bin k's band is significant."""
    band = (fft.frequency >= (k - 0.5) / (2 * M)) & (fft.frequency < (k + 0.5) / (2 * M))
    idx = np.flatnonzero(band)
    if idx.size == 0:
        idx = np.array([int(np.argmin(np.abs(fft.frequency - k / (2 * M))))])
    return bool(np.any(sig.significant_at(fft, idx)))


def cmd_diagnose(cfg: AnalysisConfig):
    series = load_series(cfg)
    M, sel, acf, fft, sig = _spectra(cfg, series)
    entries = []
    for k in cfg.resolve_k(M):
        significant = _bin_significance(sig, fft, k, M)
        entry = {"k": k, "period": (2 * M) // k, "significant": significant}
        if significant or not cfg.gate:
            try:
                rep = diagnose_acf(acf, k, cfg.exclude_c, cfg.tie_tolerance).to_dict()
                entry.update(conditions={"condition7": rep["condition7"], "condition8": rep["condition8"]},
                             ds_plus=rep["ds_plus"], excluded_sets=rep["excluded_sets"],
                             verdict=rep["verdict"])
            except DegeneracyError as exc:
                entry.update(verdict=None, note=f"DE not applicable: {exc}")
        else:
            entry.update(verdict=None, note="peak not significant; DE skipped")
        entries.append(entry)
    doc = {"config": _config_dict(cfg), "M": M, "significance": _significance_dict(sig, M, sel),
           "entries": entries}
    aio.write_json(Path(cfg.out) / "diagnose.json", doc)
    return doc


def cmd_maxima(cfg: AnalysisConfig):
    series = load_series(cfg)
    rep = analyse_maxima(series, cfg.target_count, cfg.candidate_period)
    out = Path(cfg.out)
    aio.write_json(out / "maxima.json", rep.to_dict())
    aio.write_csv(out / "distances.csv", ["index", "distance"],
                  [np.arange(1, rep.distances.size + 1), rep.distances])
    return rep


def cmd_synth(spec_path, out, seed=None):
    try:
        spec = SignalSpec.from_dict(json.loads(Path(spec_path).read_text()))
    except (OSError, ValueError, TypeError) as exc:
        raise DataError(f"malformed signal spec {spec_path}: {exc}") from exc
    if seed is not None:
        spec.seed = seed
    ts = synthesize(spec)
    aio.write_csv(Path(out) / "series.csv", ["value"], [ts.values])
    return ts


def _config_dict(cfg):
    d = asdict(cfg)
    d.pop("out")
    return d


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aliasscope", description="Echo-effect diagnosis for periodogram peaks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True)
        p.add_argument("--spacing", choices=[s.value for s in Spacing], default="day")
        p.add_argument("--window", type=int, help="detrend with a centred running mean of this (odd) length")
        p.add_argument("--pad-before", help="CSV of samples preceding the series (running-mean edges)")
        p.add_argument("--pad-after", help="CSV of samples following the series")
        p.add_argument("--truncate", action="store_true", help="without pads, drop the edges instead")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", default=".")

    def spectral(p):
        p.add_argument("--M", type=_int_list, default=[], help="lag cutoff, or comma list to choose from")
        p.add_argument("--period-cap", type=float, help="only BT periods below this enter M selection")
        p.add_argument("--confidence", type=float, default=0.95)
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--regime", choices=["auto", "markov", "white"], default="auto")

    p = sub.add_parser("acf", help="autocorrelation with two-standard-error band")
    common(p)
    p.add_argument("--M", type=_int_list, default=[])

    p = sub.add_parser("spectrum", help="FFT and BT periodograms with significance")
    common(p)
    spectral(p)

    p = sub.add_parser("diagnose", help="significance gate and DE verdict per bin")
    common(p)
    spectral(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=_int_list, default=[])
    g.add_argument("--period", type=_float_list, default=[], dest="periods")
    p.add_argument("--exclude-c", type=_int_list, default=None)
    p.add_argument("--dominant-period", type=float,
                   help="declare a dominant short period; excludes C_0 unless --exclude-c is given")
    p.add_argument("--tie-tolerance", type=float, default=DEFAULT_TIE_TOLERANCE)
    p.add_argument("--no-gate", dest="gate", action="store_false", help="run DE even for insignificant bins")

    p = sub.add_parser("maxima", help="threshold scan and spacing of strong maxima")
    common(p)
    p.add_argument("--target-count", type=int, default=10)
    p.add_argument("--candidate-period", type=float, default=6.0)

    p = sub.add_parser("synth", help="write a synthetic series from a JSON spec")
    p.add_argument("spec")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default=".")
    return ap


def config_from_args(args) -> AnalysisConfig:
    cfg = AnalysisConfig()
    for name in ("input", "spacing", "window", "truncate", "pad_before", "pad_after", "M", "period_cap",
                 "k", "periods", "confidence", "alpha", "regime", "seed", "tie_tolerance", "gate",
                 "target_count", "candidate_period", "out"):
        if getattr(args, name, None) is not None:
            setattr(cfg, name, getattr(args, name))
    exclude = getattr(args, "exclude_c", None)
    if exclude is None and getattr(args, "dominant_period", None) is not None:
        exclude = [0]
    cfg.exclude_c = exclude or []
    return cfg


def main(argv=None) -> int:
    level = os.environ.get("ALIAS_SCOPE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            if args.command == "synth":
                cmd_synth(args.spec, args.out, args.seed)
                return 0
            cfg = config_from_args(args)
            {"acf": cmd_acf, "spectrum": cmd_spectrum, "diagnose": cmd_diagnose,
             "maxima": cmd_maxima}[args.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DegeneracyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    return 0


if __name__ == "__main__":
    sys.exit(main())
