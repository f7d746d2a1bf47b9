"""scikit-learn style wrappers around the functional core.

The estimators hold their hyper-parameters in ``__init__`` and learn state in
``fit`` (attributes with a trailing underscore), so they compose with
``get_params``/``set_params``/``clone``.  Inputs are complex, which
``sklearn.utils.check_array`` rejects, hence the local validator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .channel import ChannelSet, PdpModel, estimate_pdp
from .combining import build_combiner, combine
from .equalizer import design_lowrate, equalize_stream
from .exceptions import ParameterError
from .filters import analyze, design_phydyas, synthesize

__all__ = ["FbmcModulator", "LinearCombiner", "PdpEqualizer", "check_complex_array"]


def check_complex_array(X, ndim=None, name: str = "X") -> np.ndarray:
    """Return ``X`` as a finite complex ndarray, optionally checking its rank."""
    X = np.asarray(X)
    if X.dtype.kind not in "biufc":
        raise ParameterError(f"{name} must be numeric")
    X = X.astype(complex, copy=False)
    if ndim is not None and X.ndim not in np.atleast_1d(ndim):
        raise ParameterError(f"{name} must have {ndim} dimensions, got {X.ndim}")
    if not np.all(np.isfinite(X)):
        raise ParameterError(f"{name} contains NaN or infinity")
    return X


class FbmcModulator(TransformerMixin, BaseEstimator):
    """OQAM synthesis (``transform``) and analysis (``inverse_transform``).

    Parameters
    ----------
    num_subcarriers : int
    overlap : int
        PHYDYAS overlapping factor.
    """

    def __init__(self, num_subcarriers: int = 128, overlap: int = 4):
        self.num_subcarriers = num_subcarriers
        self.overlap = overlap

    def fit(self, X=None, y=None):
        self.filter_ = design_phydyas(self.num_subcarriers, self.overlap)
        return self

    def transform(self, X):
        """Real ``(M, N_sym)`` grid to the transmit signal."""
        check_is_fitted(self, "filter_")
        X = np.asarray(X)
        if X.ndim != 2:
            raise ParameterError("grid must be 2-D")
        self.n_symbols_ = X.shape[1]
        return synthesize(X, self.filter_)

    def inverse_transform(self, X, n_symbols: int | None = None):
        """Complex demodulated grid; take ``.real`` for symbol estimates."""
        check_is_fitted(self, "filter_")
        X = check_complex_array(X, 1, "signal")
        n = n_symbols if n_symbols is not None else getattr(self, "n_symbols_", None)
        if n is None:
            raise ParameterError("n_symbols is required before any transform call")
        return analyze(X, self.filter_, n)


class LinearCombiner(TransformerMixin, BaseEstimator):
    """Per-subcarrier MRC/ZF/MMSE combiner fitted on ``H_m`` (N x K)."""

    def __init__(self, kind: str = "zf", noise_var: float = 0.0, subcarrier: int = 0):
        self.kind = kind
        self.noise_var = noise_var
        self.subcarrier = subcarrier

    def fit(self, X, y=None):
        H = check_complex_array(X, 2, "H")
        self.combiner_ = build_combiner(H, self.kind, self.noise_var, self.subcarrier)
        self.weights_ = self.combiner_.weights
        return self

    def transform(self, X):
        """``(N, N_sym)`` or ``(N, M, N_sym)`` antenna samples to ``(K, N_sym)`` streams."""
        check_is_fitted(self, "combiner_")
        return combine(self.combiner_, check_complex_array(X, (2, 3)))


class PdpEqualizer(TransformerMixin, BaseEstimator):
    """Low-rate PDP equalizer fitted on a PDP or on channel taps.

    ``fit`` accepts a 1-D PDP, a :class:`PdpModel`, or channel taps of shape
    ``(N, L_h)`` from which the sample PDP is estimated.
    """

    def __init__(self, num_subcarriers: int = 128, subcarrier: int = 0, n_taps: int = 9, method: str = "wls",
                 overlap: int = 4):
        self.num_subcarriers = num_subcarriers
        self.subcarrier = subcarrier
        self.n_taps = n_taps
        self.method = method
        self.overlap = overlap

    def fit(self, X, y=None):
        if isinstance(X, PdpModel):
            pdp = X
        else:
            A = np.asarray(X)
            if A.ndim == 1:
                pdp = PdpModel(np.real_if_close(A).astype(float))
            elif A.ndim == 2:
                pdp = estimate_pdp(ChannelSet(A[:, None, :]), 0)
            else:
                raise ParameterError("fit expects a PDP vector or (N, L_h) channel taps")
        filt = design_phydyas(self.num_subcarriers, self.overlap)
        self.pdp_ = pdp
        self.equalizer_ = design_lowrate(pdp, self.num_subcarriers, self.n_taps, filt, self.method)
        return self

    def transform(self, X):
        """Equalize phase-compensated combined streams along the last axis."""
        check_is_fitted(self, "equalizer_")
        return equalize_stream(check_complex_array(X, (1, 2)), self.equalizer_, self.subcarrier)
