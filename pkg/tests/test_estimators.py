import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from fbmc_mimo.channel import draw_channels, exp_pdp, freq_response
from fbmc_mimo.equalizer import design_lowrate
from fbmc_mimo.estimators import FbmcModulator, LinearCombiner, PdpEqualizer, check_complex_array
from fbmc_mimo.exceptions import ParameterError
from fbmc_mimo.filters import design_phydyas


def test_params_and_clone():
    est = PdpEqualizer(num_subcarriers=64, subcarrier=3, n_taps=7)
    assert est.get_params()["n_taps"] == 7
    c = clone(est).set_params(n_taps=11)
    assert c.n_taps == 11 and est.n_taps == 7


@pytest.mark.parametrize("est,X", [
    (FbmcModulator(), np.zeros((128, 2))),
    (LinearCombiner(), np.zeros((4, 3))),
    (PdpEqualizer(), np.zeros(5)),
])
def test_not_fitted(est, X):
    with pytest.raises(NotFittedError):
        est.transform(X)


def test_modulator_roundtrip():
    mod = FbmcModulator(32).fit()
    d = np.random.default_rng(0).standard_normal((32, 6))
    y = mod.inverse_transform(mod.transform(d))
    assert np.max(np.abs(y.real - d)) < 2e-3 * np.max(np.abs(d))
    with pytest.raises(ParameterError):
        FbmcModulator(32).fit().inverse_transform(np.zeros(500))


def test_linear_combiner_zf():
    ch = draw_channels([exp_pdp(0.1, 4)] * 3, 12, seed=0)
    H = freq_response(ch, 5, 32)
    comb = LinearCombiner("zf", subcarrier=5).fit(H)
    s = np.random.default_rng(1).standard_normal((3, 20))
    np.testing.assert_allclose(comb.transform(H @ s), s, atol=1e-10)


def test_pdp_equalizer_fit_variants():
    pdp = exp_pdp(0.1, 8)
    a = PdpEqualizer(64, 16).fit(pdp)
    b = PdpEqualizer(64, 16).fit(pdp.taps)
    ref = design_lowrate(pdp, 64, filt=design_phydyas(64))
    np.testing.assert_allclose(a.equalizer_.taps, ref.taps)
    np.testing.assert_allclose(b.equalizer_.taps, ref.taps)
    ch = draw_channels([pdp], 2000, seed=2)
    c = PdpEqualizer(64, 16).fit(ch.taps[:, 0, :])
    np.testing.assert_allclose(c.pdp_.taps, pdp.taps, atol=0.05)
    z = np.zeros(30, complex)
    z[15] = 1
    assert a.transform(z).shape == (30,)
    with pytest.raises(ParameterError):
        PdpEqualizer().fit(np.zeros((2, 2, 2)))


def test_check_complex_array():
    assert check_complex_array([1, 2]).dtype == complex
    with pytest.raises(ParameterError):
        check_complex_array(["a"])
    with pytest.raises(ParameterError):
        check_complex_array([np.nan])
    with pytest.raises(ParameterError):
        check_complex_array([1.0], ndim=2)
