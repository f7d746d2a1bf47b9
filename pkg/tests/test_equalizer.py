import json

import numpy as np
import pytest

from fbmc_mimo.channel import PdpModel, exp_pdp
from fbmc_mimo.equalizer import (
    FullRateEqualizer,
    LowRateEqualizer,
    design_fullrate,
    design_lowrate,
    equalize_stream,
    equalizer_from_json,
    equalizer_to_json,
    fullrate_residual,
    lowrate_from_fullrate,
    lowrate_residual,
    modified_analysis_filter,
    stream_taps,
)
from fbmc_mimo.exceptions import IllConditionedPdpError, ParameterError
from fbmc_mimo.filters import design_phydyas

TWO_TAP = PdpModel([0.5, 0.5])


def weighted_response_gap(a, b, filt):
    omega = np.linspace(-np.pi, np.pi, 4001)
    w = np.abs(filt.frequency_response(2 * omega / filt.M)) ** 2
    w /= w.max()
    return np.max(w * np.abs(a.response(omega) - b.response(omega)))


def test_identity_pdp_gives_unit_impulse():
    eq = design_lowrate(PdpModel([1.0]), 64)
    np.testing.assert_allclose(eq.taps, (eq.lags == 0).astype(float), atol=1e-10)
    fr = design_fullrate(PdpModel([1.0]), 5, 64)
    np.testing.assert_allclose(fr.taps, (fr.lags == 0).astype(float), atol=1e-12)


def test_two_tap_lowrate_residual():
    f = design_phydyas(64)
    eq = design_lowrate(TWO_TAP, 64, 9, f)
    assert lowrate_residual(eq, TWO_TAP, 64, f)["weighted_max"] < 1e-3


def test_long_channel_lowrate_residual():
    p = exp_pdp(0.05, 50)
    f = design_phydyas(512)
    res = [lowrate_residual(design_lowrate(p, 512, L, f), p, 512, f)["weighted_max"] for L in (9, 15, 21)]
    assert min(res) < 1e-3
    assert res[-1] < res[0]


def test_fsamp_method_is_available_but_worse():
    f = design_phydyas(128)
    p = exp_pdp(0.05, 16)
    wls = lowrate_residual(design_lowrate(p, 128, 9, f), p, 128, f)["weighted_max"]
    fs = lowrate_residual(design_lowrate(p, 128, 9, f, method="fsamp"), p, 128, f)["weighted_max"]
    assert wls < fs


def test_unknown_method_and_even_length():
    with pytest.raises(ParameterError):
        design_lowrate(TWO_TAP, 64, 9, method="remez")
    with pytest.raises(ParameterError):
        design_lowrate(TWO_TAP, 64, 8)
    with pytest.raises(ParameterError):
        design_fullrate(TWO_TAP, 0, 64, n_taps=100)


def test_ill_conditioned_pdp_rejected():
    # uniform 8-tap PDP has a spectral zero at 2 pi / 8, the band edge for M = 8
    with pytest.raises(IllConditionedPdpError):
        design_lowrate(exp_pdp(0.0, 8), 8)
    with pytest.raises(IllConditionedPdpError):
        design_fullrate(exp_pdp(0.0, 8), 0, 8)


@pytest.mark.parametrize("M", [64, 128])
def test_fullrate_passband_residual(M):
    for p in (TWO_TAP, exp_pdp(0.05, 16)):
        assert fullrate_residual(design_fullrate(p, 3, M), p, M)["max"] < 1e-3


def test_fullrate_modulation_consistency():
    M, m = 64, 7
    base = design_fullrate(TWO_TAP, 0, M)
    mod = design_fullrate(TWO_TAP, m, M)
    np.testing.assert_allclose(mod.taps, base.taps * np.exp(2j * np.pi * m * base.lags / M), atol=1e-14)
    np.testing.assert_allclose(mod.baseband().taps, base.taps, atol=1e-14)


def test_equalize_stream_identity_and_zero():
    rng = np.random.default_rng(0)
    z = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    unit = LowRateEqualizer(np.array([0, 0, 1, 0, 0]))
    np.testing.assert_allclose(equalize_stream(z, unit, 4), z)
    np.testing.assert_array_equal(equalize_stream(np.zeros(10), unit, 3), np.zeros(10))


def test_equalize_stream_matches_direct_convolution():
    rng = np.random.default_rng(1)
    z = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    eq = LowRateEqualizer(np.array([0.2 - 0.1j, 1.0, -0.3j]))
    m = 3
    c = stream_taps(eq, m)
    ref = np.array([sum(c[j + 1] * z[n - j] for j in (-1, 0, 1) if 0 <= n - j < z.size) for n in range(z.size)])
    np.testing.assert_allclose(equalize_stream(z, eq, m), ref, atol=1e-14)


def test_stream_tap_parity():
    eq = LowRateEqualizer(np.ones(5))
    n = eq.lags
    # phase-compensated taps differ by e^{j pi m n}: even m unmodulated, odd m alternating
    np.testing.assert_allclose(stream_taps(eq, 2) / stream_taps(eq, 0), 1.0, atol=1e-14)
    np.testing.assert_allclose(stream_taps(eq, 3) / stream_taps(eq, 0), (-1.0) ** n, atol=1e-14)


def test_lowrate_from_fullrate_impulse():
    M = 32
    impulse = FullRateEqualizer(np.array([1.0]), 0, M)
    out = lowrate_from_fullrate(impulse, M)
    np.testing.assert_allclose(out.taps, (out.lags == 0).astype(float), atol=1e-12)


def test_lowrate_from_fullrate_linear():
    M = 32
    fr = design_fullrate(TWO_TAP, 0, M)
    a = lowrate_from_fullrate(fr, M)
    b = lowrate_from_fullrate(FullRateEqualizer(2 * fr.taps, 0, M), M)
    np.testing.assert_allclose(b.taps, 2 * a.taps, atol=1e-14)


def test_lowrate_from_fullrate_trim():
    fr = design_fullrate(TWO_TAP, 0, 32)
    assert lowrate_from_fullrate(fr, 32, n_taps=9).taps.size == 9
    with pytest.raises(ParameterError):
        lowrate_from_fullrate(fr, 32, n_taps=8)


def test_lowrate_from_fullrate_matches_design_two_tap():
    M = 64
    f = design_phydyas(M)
    direct = design_lowrate(TWO_TAP, M, 9, f)
    via = lowrate_from_fullrate(design_fullrate(TWO_TAP, 0, M), M, sinc_halfwidth=32)
    assert weighted_response_gap(direct, via, f) < 1e-3


def test_modified_analysis_filter_inverts_pdp():
    M, m = 64, 5
    f = design_phydyas(M)
    p = exp_pdp(0.05, 16)
    rx, zero = modified_analysis_filter(f, design_fullrate(p, m, M), m)
    c = np.convolve(rx, p.modulated(m, M))
    ref = np.conj(f.modulated(m))[::-1]
    seg = c[zero - (f.length - 1):zero + 1]
    assert np.max(np.abs(seg - ref)) < 1e-3 * np.max(np.abs(ref))
    plain, z0 = modified_analysis_filter(f, None, m)
    np.testing.assert_array_equal(plain, ref)
    assert z0 == f.length - 1


@pytest.mark.parametrize("eq", [LowRateEqualizer(np.array([0.1, 1 - 0.5j, 0.2j]), 2),
                                FullRateEqualizer(np.array([1j, 2.0, 3.0]), 4, 16, 1)])
def test_json_round_trip(eq):
    text = equalizer_to_json(eq)
    rec = json.loads(text)
    assert all(len(t) == 2 for t in rec["taps"])
    back = equalizer_from_json(text)
    assert type(back) is type(eq)
    np.testing.assert_array_equal(back.taps, eq.taps)
    assert back.terminal == eq.terminal


def test_json_unknown_type():
    with pytest.raises(ParameterError):
        equalizer_from_json('{"type": "Other", "taps": []}')
