"""Echo-effect diagnosis for periodogram peaks, with the supporting spectral chain."""

from .autocorr import AutocorrFunction, autocorr_standard_errors, autocorrelation, is_significantly_positive
from .de import (
    NOT_TREATABLE,
    PEAK_SUPPORTED,
    DeReport,
    DsIndices,
    LagPartition,
    diagnose_acf,
    diagnose_peak,
    ds_indices,
    evaluate_conditions,
    partition_lags,
)
from .maxima import find_max_activity_interval, spacing_report, threshold_scan
from .periodogram import Periodogram, bt_periodogram, bt_raw, bt_smoothed, choose_M, fft_periodogram
from .significance import (
    detect_markov_persistence,
    fisher_test,
    ks_white_noise_test,
    red_noise_level,
)
from .timeseries import (
    FluctuationSeries,
    SignalSpec,
    Sinusoid,
    Spacing,
    TimeSeries,
    aggregate_to_rotation,
    detrend,
    running_mean,
    synthesize,
)

__version__ = "0.1.0"
