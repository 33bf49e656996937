import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from aliasscope.autocorr import AutocorrFunction, autocorrelation
from aliasscope.errors import InvalidArgumentError
from aliasscope.periodogram import (
    bt_periodogram,
    bt_raw,
    bt_raw_all,
    bt_smoothed,
    choose_M,
    fft_periodogram,
)
from aliasscope.timeseries import SignalSpec, Sinusoid, synthesize


def loop_bt(c, M, k):
    """Term-by-term evaluation of the raw estimate, written without numpy."""
    total = c[0] / M + ((-1) ** k) * c[M] / M
    acc = 0.0
    for tau in range(1, M):
        acc += c[tau] * math.cos(math.pi * k * tau / M)
    return total + 2.0 * acc / M


def acf_from(c, n=10_000):
    c = np.asarray(c, dtype=float)
    return AutocorrFunction(c, c.size - 1, n, np.empty(0))


def test_white_acf_gives_flat_estimate():
    c = np.zeros(101)
    c[0] = 1.0
    assert bt_raw(acf_from(c), 7) == pytest.approx(0.01, abs=1e-15)


def test_cosine_acf_concentrates_at_k0():
    M, k0 = 200, 10
    c = np.cos(np.pi * k0 * np.arange(M + 1) / M)
    got = bt_raw(acf_from(c), k0)
    assert got == pytest.approx(loop_bt(c, M, k0), abs=1e-12)
    assert got == pytest.approx(1.0, abs=1e-12)
    # orthogonality leaves the other harmonics at zero
    raw = bt_raw_all(acf_from(c))
    assert np.max(np.abs(np.delete(raw, k0))) < 1e-12


def test_last_harmonic_matches_loop(rng):
    acf = autocorrelation(rng.normal(size=400), 41)
    assert bt_raw(acf, 41) == pytest.approx(loop_bt(acf.c, 41, 41), abs=1e-12)


def test_k_out_of_range(rng):
    acf = autocorrelation(rng.normal(size=100), 10)
    for k in (0, 11):
        with pytest.raises(InvalidArgumentError):
            bt_raw(acf, k)


def test_vectorized_matches_loop(rng):
    acf = autocorrelation(rng.normal(size=300).cumsum(), 90)
    raw = bt_raw_all(acf)
    want = [loop_bt(acf.c, 90, k) for k in range(91)]
    np.testing.assert_allclose(raw, want, rtol=0, atol=1e-12)


def test_smoothing_examples():
    np.testing.assert_allclose(bt_smoothed([3.0] * 7), 3.0)
    # both ends use (0.5, 0.5) with their single neighbour
    np.testing.assert_allclose(bt_smoothed([0.0, 1.0, 0.0]), [0.5, 0.5, 0.5])
    v = np.zeros(11)
    v[5] = 1.0
    out = bt_smoothed(v)
    np.testing.assert_allclose(out[4:7], [0.25, 0.5, 0.25])
    assert np.count_nonzero(out) == 3
    with pytest.raises(InvalidArgumentError):
        bt_smoothed([1.0, 2.0])


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.integers(3, 60), elements=st.floats(-1e6, 1e6)))
def test_smoothing_is_convex(v):
    out = bt_smoothed(v)
    n = v.size
    for i in range(n):
        w = v[max(i - 1, 0): min(i + 2, n)]
        assert w.min() - 1e-9 <= out[i] <= w.max() + 1e-9


def endpoint_weights_by_brute_force(M):
    """Weights w_k with sum_k w_k S_k = c_0 for every acf, solved from unit acfs."""
    # S = T c for a linear map T; find w with w^T T = e_0
    T = np.empty((M + 1, M + 1))
    for j in range(M + 1):
        c = np.zeros(M + 1)
        c[j] = 1.0
        T[:, j] = [loop_bt(c, M, k) for k in range(M + 1)]
    return np.linalg.solve(T.T, np.eye(M + 1)[0])


def test_endpoint_weights_at_M4():
    w = endpoint_weights_by_brute_force(4)
    np.testing.assert_allclose(w, [0.5, 1, 1, 1, 0.5], atol=1e-12)


def test_variance_recovery(rng):
    acf = autocorrelation(rng.normal(size=700).cumsum(), 200)
    raw = bt_raw_all(acf)
    total = 0.5 * raw[0] + raw[1:-1].sum() + 0.5 * raw[-1]
    assert total == pytest.approx(1.0, abs=1e-9)


def test_bt_periodogram_grid(rng):
    acf = autocorrelation(rng.normal(size=500), 100)
    pg = bt_periodogram(acf)
    assert pg.values.size == 100
    assert pg.k[0] == 1 and pg.k[-1] == 100
    assert pg.period[0] == 200 and pg.period[12] == 15  # [200/13]
    raw = bt_periodogram(acf, smoothed=False)
    np.testing.assert_allclose(raw.values, bt_raw_all(acf)[1:])
    np.testing.assert_allclose(pg.values, bt_smoothed(bt_raw_all(acf))[1:])


def test_fft_peak_period_154():
    x = synthesize(SignalSpec(3653, [Sinusoid(154)])).values
    pg = fft_periodogram(x)
    assert abs(pg.period[np.argmax(pg.values)] - 154) <= 2
    assert pg.values.min() >= 0


def test_fft_zero_series():
    pg = fft_periodogram(np.zeros(64))
    assert np.all(pg.values == 0)


def test_fft_two_sinusoids():
    x = synthesize(SignalSpec(3653, [Sinusoid(450), Sinusoid(90)])).values
    pg = fft_periodogram(x)
    v = pg.values
    peaks = np.flatnonzero((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])) + 1
    top = peaks[np.argsort(v[peaks])[::-1][:2]]
    got = sorted(pg.period[top])
    assert abs(got[0] - 90) < 2 and abs(got[1] - 450) < 10


@pytest.mark.parametrize("window", ["hamming", "none"])
def test_fft_parseval(rng, window):
    x = rng.normal(size=301)
    pg = fft_periodogram(x, window=window, pad_to=1024)
    w = np.hamming(301) if window == "hamming" else np.ones(301)
    energy = np.sum(((x - x.mean()) * w) ** 2)
    # the zero-frequency bin is dropped from the report; add it back
    dc = np.sum((x - x.mean()) * w) ** 2 / 1024
    assert pg.values.sum() + dc == pytest.approx(energy, rel=1e-10)


def test_fft_default_padding(rng):
    pg = fft_periodogram(rng.normal(size=300))
    assert pg.values.size == 2048 // 2  # next power of two >= 1200, minus DC


def test_fft_bad_inputs(rng):
    with pytest.raises(InvalidArgumentError):
        fft_periodogram(np.ones(5))
    with pytest.raises(InvalidArgumentError):
        fft_periodogram(rng.normal(size=20), window="kaiser")
    with pytest.raises(InvalidArgumentError):
        fft_periodogram(rng.normal(size=20), pad_to=16)


@settings(max_examples=40, deadline=None)
@given(arrays(float, st.integers(8, 200), elements=st.floats(-1e3, 1e3)))
def test_fft_time_reversal_symmetry(x):
    a = fft_periodogram(x).values
    b = fft_periodogram(x[::-1]).values
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-9 * (a.max() + 1e-30))


def test_choose_M_sinusoid():
    x = synthesize(SignalSpec(3653, [Sinusoid(154)])).values
    cands = [365, 730, 1217]
    sel = choose_M(x, cands, period_cap=3653 / 6)
    assert all(sel.scores[m] > 0.9 for m in cands)
    assert sel.M == 365 and not sel.low_conformity


def test_choose_M_white_noise_flags_low_conformity():
    x = np.random.default_rng(5).normal(size=3653)
    sel = choose_M(x, [365, 730, 1217], period_cap=3653 / 6)
    assert sel.low_conformity
    assert sel.M == max(sel.scores, key=sel.scores.get)


def test_choose_M_singleton_and_empty(rng):
    x = rng.normal(size=400)
    assert choose_M(x, [60], period_cap=100).M == 60
    with pytest.raises(InvalidArgumentError):
        choose_M(x, [], period_cap=100)
