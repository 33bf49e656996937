import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from aliasscope.autocorr import AutocorrFunction, autocorrelation
from aliasscope.errors import InvalidArgumentError, InvalidAutocorrelationError
from aliasscope.periodogram import Periodogram, bt_periodogram, fft_periodogram
from aliasscope.significance import (
    MARKOV,
    WHITE,
    assess,
    detect_markov_persistence,
    fisher_g_pvalue,
    fisher_test,
    fourier_periodogram,
    ks_white_noise_test,
    red_noise_continuum,
    red_noise_level,
)
from aliasscope.timeseries import SignalSpec, synthesize


def acf_c1(c1, n=1000, M=50):
    c = np.zeros(M + 1)
    c[0], c[1] = 1.0, c1
    return AutocorrFunction(c, M, n, np.empty(0))


def flat_periodogram(m=50, method="fft"):
    k = np.arange(1, m + 1)
    return Periodogram(method, np.full(m, 2.0), k / (2.0 * m), 2.0 * m / k, k, M=m)


def test_markov_detection_examples():
    ar = synthesize(SignalSpec(1000, [], 0.8, 1.0, seed=1)).values
    assert detect_markov_persistence(autocorrelation(ar, 50))
    assert not detect_markov_persistence(acf_c1(0.0))
    # exactly at the bound is not persistence
    assert not detect_markov_persistence(acf_c1(2 / math.sqrt(1000)))


def test_markov_detection_false_positive_rate():
    rng = np.random.default_rng(3)
    hits = sum(detect_markov_persistence(autocorrelation(rng.normal(size=1000), 10)) for _ in range(300))
    assert hits / 300 <= 0.05


def test_red_noise_flat_for_r0():
    pg = flat_periodogram()
    level = red_noise_level(acf_c1(0.0), pg, 0.95)
    np.testing.assert_allclose(level, 2.0 * 2.9957, rtol=1e-4)
    assert np.ptp(level) == 0


def test_red_noise_smoothed_dof():
    pg = flat_periodogram(method="bt_smoothed")
    level = red_noise_level(acf_c1(0.0), pg, 0.95)
    nu = 8 / 3
    np.testing.assert_allclose(level, 2.0 * stats.chi2.ppf(0.95, nu) / nu)
    assert level[0] < 2.0 * 2.9957


def test_red_noise_decreasing_for_positive_r():
    level = red_noise_level(acf_c1(0.9), flat_periodogram(), 0.95)
    assert level[0] > level[-1]
    assert np.all(np.diff(level) < 0)


def test_red_noise_mean_matches_periodogram():
    pg = flat_periodogram()
    shape = red_noise_continuum(pg.frequency, 0.6)
    assert shape[0] == pytest.approx(0.64 / (1.36 - 1.2 * math.cos(math.pi / 50)))
    level = red_noise_level(acf_c1(0.6), pg, 0.5, nu=2)
    # the median of chi2_2 / 2 is ln 2
    assert level.mean() == pytest.approx(2.0 * math.log(2), rel=1e-12)


@pytest.mark.parametrize("r", [1.0, -1.0, 1.3])
def test_red_noise_rejects_nonstationary_r(r):
    with pytest.raises(InvalidAutocorrelationError):
        red_noise_continuum([0.1], r)


def test_red_noise_exceedance_on_ar1():
    rng = np.random.default_rng(21)
    exceed = total = 0
    for _ in range(100):
        x = synthesize(SignalSpec(1024, [], 0.7, 1.0, seed=int(rng.integers(1 << 31)))).values
        pg = fourier_periodogram(x)
        level = red_noise_level(autocorrelation(x, 100), pg, 0.95)
        hi = pg.frequency > 0.25
        exceed += np.count_nonzero(pg.values[hi] > level[hi])
        total += np.count_nonzero(hi)
    assert abs(exceed / total - 0.05) < 0.02


def fisher_pvalue_float(g, q):
    return sum((-1) ** (j + 1) * math.comb(q, j) * (1 - j * g) ** (q - 1) for j in range(1, int(1 / g) + 1))


@pytest.mark.parametrize("g,q", [(0.3, 5), (0.5, 8), (0.25, 10), (0.21, 12)])
def test_fisher_pvalue_small_q_matches_float_sum(g, q):
    assert fisher_g_pvalue(g, q) == pytest.approx(fisher_pvalue_float(g, q), abs=1e-12)


def test_fisher_pvalue_matches_simulation():
    rng = np.random.default_rng(8)
    q = 30
    I = rng.exponential(size=(20000, q))
    g = I.max(axis=1) / I.sum(axis=1)
    for g0 in (0.15, 0.2, 0.25):
        assert fisher_g_pvalue(g0, q) == pytest.approx(np.mean(g > g0), abs=0.01)


def test_fisher_pvalue_large_q_is_a_probability():
    for g in (0.002, 0.01, 0.02, 0.05):
        p = fisher_g_pvalue(g, 2000)
        assert 0.0 <= p <= 1.0
    # the first-order approximation holds in the far tail
    assert fisher_g_pvalue(0.02, 2000) == pytest.approx(2000 * 0.98 ** 1999, rel=1e-6)


def test_fisher_extremes():
    I = np.zeros(20)
    I[4] = 3.0
    k = np.arange(1, 21)
    res = fisher_test(Periodogram("fft", I, k / 41, 41 / k, k))
    assert res.statistic == 1.0 and res.p_value == 0.0 and res.reject
    assert fisher_g_pvalue(0.01, 20) == 1.0


def sinusoid_plus_noise(seed, n=512, sigma=0.1):
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    return np.cos(2 * np.pi * t * 37.3 / n) + sigma * rng.normal(size=n)


def test_sinusoid_rejects_white_noise():
    x = sinusoid_plus_noise(0)
    assert fisher_test(x).reject
    assert ks_white_noise_test(x).reject


def test_white_noise_rejection_rates():
    rng = np.random.default_rng(77)
    f = k = 0
    trials = 400
    for _ in range(trials):
        x = rng.normal(size=512)
        f += fisher_test(x).reject
        k += ks_white_noise_test(x).reject
    # loose band here; the acceptance suite runs the full 1000 trials
    assert 0.02 <= f / trials <= 0.08
    assert 0.02 <= k / trials <= 0.08


def test_ks_on_diagonal():
    I = np.ones(100)
    j = np.arange(1, 101)
    res = ks_white_noise_test(Periodogram("fft", I, j / 201, 201 / j, j))
    assert res.statistic < 0.011
    assert not res.reject


def test_too_few_frequencies():
    with pytest.raises(InvalidArgumentError):
        fisher_test(np.arange(8.0))
    with pytest.raises(InvalidArgumentError):
        ks_white_noise_test(np.arange(8.0))
    with pytest.raises(InvalidArgumentError):
        fisher_test(np.zeros(64))


def test_fourier_periodogram_grid():
    pg = fourier_periodogram(np.random.default_rng(0).normal(size=64))
    assert pg.values.size == 31
    assert pg.frequency[-1] == pytest.approx(31 / 64)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(1e-3, 1e3))
def test_tests_are_scale_invariant(seed, a):
    x = np.random.default_rng(seed).normal(size=128)
    for test in (fisher_test, ks_white_noise_test):
        r0, r1 = test(x), test(a * x)
        assert r1.statistic == pytest.approx(r0.statistic, rel=1e-9)
        assert r1.p_value == pytest.approx(r0.p_value, rel=1e-6, abs=1e-12)
        assert 0.0 <= r0.p_value <= 1.0


def test_assess_picks_regime():
    ar = synthesize(SignalSpec(2000, [], 0.7, 1.0, seed=2)).values
    acf = autocorrelation(ar, 200)
    res = assess(acf, fft_periodogram(ar), ar)
    assert res.regime == MARKOV
    assert res.red_noise_level is not None and res.fisher is None and res.ks is None

    wn = np.random.default_rng(2).normal(size=2000)
    acf = autocorrelation(wn, 200)
    res = assess(acf, bt_periodogram(acf), wn, regime="white")
    assert res.regime == WHITE
    assert res.red_noise_level is None and res.fisher is not None and res.ks is not None
    with pytest.raises(InvalidArgumentError):
        assess(acf, bt_periodogram(acf), wn, regime="pink")
    with pytest.raises(InvalidArgumentError):
        assess(acf, bt_periodogram(acf), None, regime="white")


def test_significant_at_per_bin():
    ar = synthesize(SignalSpec(2000, [], 0.7, 1.0, seed=9)).values
    acf = autocorrelation(ar, 200)
    pg = bt_periodogram(acf)
    res = assess(acf, pg, ar, regime="markov")
    idx = np.arange(pg.values.size)
    np.testing.assert_array_equal(res.significant_at(pg, idx), pg.values > res.red_noise_level)
