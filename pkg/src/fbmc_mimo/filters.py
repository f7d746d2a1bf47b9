"""PHYDYAS prototype filter and the OQAM synthesis/analysis filter banks.

Conventions
-----------
* ``f_m[l] = f[l] exp(j 2 pi m l / M)`` is modulated relative to the start of the
  filter, and the basis function of lattice point ``(m, n)`` is
  ``a_{m,n}[l] = f_m[l - n M/2] exp(j theta_{m,n})`` with
  ``theta_{m,n} = pi/2 (m + n)``.
* The analysis output is the matched-filter inner product
  ``y_{m,n} = <y, a_{m,n}>``, i.e. the output of ``f_m^*[-l]`` sampled at
  ``l = n M/2`` and phase compensated.  With this alignment
  ``Re{analyze(synthesize(d))} == d`` up to the filter's Nyquist deviation.
* Grids are zero outside ``0 <= n < N_sym``; no cyclic extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ParameterError

__all__ = [
    "PHYDYAS_COEFFS",
    "PrototypeFilter",
    "BasisIndex",
    "design_phydyas",
    "oqam_phase",
    "synthesize",
    "analyze",
    "basis_function",
    "basis_inner_product",
]

# Frequency-sampling coefficients H_1 .. H_{kappa-1}; H_0 = 1.
PHYDYAS_COEFFS = {
    2: (np.sqrt(2) / 2,),
    3: (0.911438, 0.411438),
    4: (0.97195983, np.sqrt(2) / 2, np.sqrt(1 - 0.97195983**2)),
}


@dataclass(frozen=True)
class PrototypeFilter:
    """Real prototype filter of length ``overlap_factor * num_subcarriers``.

    ``nyquist_deviation`` is the measured ``max_{j != 0} |q[jM]|`` of the
    autocorrelation ``q = f * f[-.]`` normalised to ``q[0] = 1``.
    """

    coeffs: np.ndarray
    num_subcarriers: int
    overlap_factor: int
    nyquist_deviation: float = field(default=np.nan)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.size != self.overlap_factor * self.num_subcarriers:
            raise ParameterError("filter length must equal overlap_factor * num_subcarriers")
        if np.isnan(self.nyquist_deviation):
            object.__setattr__(self, "nyquist_deviation", _nyquist_deviation(coeffs, self.num_subcarriers))

    @property
    def M(self) -> int:
        return self.num_subcarriers

    @property
    def length(self) -> int:
        return self.coeffs.size

    @property
    def hop(self) -> int:
        """Half-symbol spacing ``M/2`` in samples."""
        return self.num_subcarriers // 2

    def modulated(self, m: int) -> np.ndarray:
        """``f_m[l] = f[l] exp(j 2 pi m l / M)``."""
        ell = np.arange(self.length)
        return self.coeffs * np.exp(2j * np.pi * m * ell / self.M)

    def autocorrelation(self) -> np.ndarray:
        """``q[l]`` for lags ``-(L_f-1) .. L_f-1``, normalised to ``q[0] = 1``."""
        q = np.convolve(self.coeffs, self.coeffs[::-1])
        return q / q[self.length - 1]

    def orthogonality_deviation(self, span: int = 2, lag_span: int | None = None) -> float:
        """Worst-case real-part leakage ``sum |Re<a_{0,0}, a_{m,n}>|`` over the neighbours.

        Bounds ``|Re{y_{m,n}} - d_{m,n}| / max|d|`` for a noise-free back-to-back link.
        """
        if lag_span is None:
            lag_span = 2 * self.overlap_factor
        total = 0.0
        origin = BasisIndex(span, lag_span)
        for dm in range(-span, span + 1):
            for dn in range(-lag_span, lag_span + 1):
                if dm == 0 and dn == 0:
                    continue
                total += abs(basis_inner_product(origin, BasisIndex(span + dm, lag_span + dn), self).real)
        return total

    def frequency_response(self, omega) -> np.ndarray:
        """DTFT ``F(omega)`` of the (unmodulated) prototype."""
        omega = np.asarray(omega, dtype=float)
        ell = np.arange(self.length)
        return np.exp(-1j * np.multiply.outer(omega, ell)) @ self.coeffs


@dataclass(frozen=True)
class BasisIndex:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0:
            raise ParameterError("subcarrier index must be non-negative")


def _nyquist_deviation(coeffs: np.ndarray, M: int) -> float:
    q = np.convolve(coeffs, coeffs[::-1])
    center = coeffs.size - 1
    q = q / q[center]
    lags = np.arange(q.size) - center
    mask = (lags % M == 0) & (lags != 0)
    return float(np.max(np.abs(q[mask]))) if mask.any() else 0.0


def design_phydyas(M: int, overlap: int = 4) -> PrototypeFilter:
    """PHYDYAS frequency-sampling prototype with unit energy.

    The impulse response is
    ``h[l] = 1 + 2 sum_k (-1)^k H_k cos(2 pi k l / (kappa M))`` for
    ``l = 1 .. kappa M - 1`` and ``h[0] = 0``, so the filter is symmetric
    about ``kappa M / 2`` (``f[l] == f[L_f - l]``).

    Parameters
    ----------
    M : int
        Number of subcarriers, even and at least 4.
    overlap : int
        Overlapping factor kappa, one of 2, 3, 4.
    """
    if M < 4 or M % 2:
        raise ParameterError(f"M must be even and >= 4, got {M}")
    if overlap not in PHYDYAS_COEFFS:
        raise ParameterError(f"no PHYDYAS coefficients for overlap factor {overlap}")
    length = overlap * M
    ell = np.arange(length)
    h = np.ones(length)
    for k, Hk in enumerate(PHYDYAS_COEFFS[overlap], start=1):
        h += 2 * (-1) ** k * Hk * np.cos(2 * np.pi * k * ell / length)
    h[0] = 0.0
    h /= np.linalg.norm(h)
    return PrototypeFilter(h, M, overlap)


def oqam_phase(m, n) -> np.ndarray:
    """``theta_{m,n} = pi/2 (m + n)``."""
    return 0.5 * np.pi * (np.asarray(m) + np.asarray(n))


def _check_grid(data, filt: PrototypeFilter) -> np.ndarray:
    data = np.asarray(data)
    if data.ndim != 2:
        raise ParameterError("grid must be a 2-D array (subcarriers x symbols)")
    if data.shape[0] != filt.M:
        raise ParameterError(f"grid has {data.shape[0]} subcarriers, filter expects {filt.M}")
    if data.shape[1] < 1:
        raise ParameterError("grid must contain at least one symbol")
    return data


def synthesize(grid, filt: PrototypeFilter) -> np.ndarray:
    """OQAM synthesis filter bank.

    ``x[l] = sum_{m,n} d_{m,n} f_m[l - n M/2] exp(j theta_{m,n})``.

    Parameters
    ----------
    grid : array_like, shape (M, N_sym)
        Real symbols ``d_{m,n}``; a complex grid is accepted and transmitted as is.
    filt : PrototypeFilter

    Returns
    -------
    x : ndarray, shape (N_sym * M/2 + L_f - M/2,)
    """
    d = _check_grid(grid, filt)
    M, n_sym = d.shape
    hop, L = filt.hop, filt.length
    m = np.arange(M)[:, None]
    n = np.arange(n_sym)[None, :]
    c = d * np.exp(1j * oqam_phase(m, n))
    # period-M sequence sum_m c_m e^{j2pi m u/M}, tiled over the filter length
    s = M * np.fft.ifft(c, axis=0)
    seg = np.tile(s, (filt.overlap_factor, 1)) * filt.coeffs[:, None]
    n_blocks = 2 * filt.overlap_factor
    out = np.zeros((n_sym + n_blocks - 1, hop), dtype=complex)
    for j in range(n_blocks):
        out[j:j + n_sym] += seg[j * hop:(j + 1) * hop].T
    return out.reshape(-1)[: n_sym * hop + L - hop]


def analyze(signal, filt: PrototypeFilter, n_sym: int) -> np.ndarray:
    """OQAM analysis filter bank (matched filtering, decimation, phase compensation).

    Returns the complex grid ``y_{m,n} = <signal, a_{m,n}>`` of shape
    ``(M, n_sym)``; the real part is the symbol estimate.
    """
    y = np.asarray(signal)
    if y.ndim != 1:
        raise ParameterError("signal must be one-dimensional")
    if n_sym < 1:
        raise ParameterError("n_sym must be positive")
    M, hop, L = filt.M, filt.hop, filt.length
    need = (n_sym - 1) * hop + L
    if y.size < need:
        raise ParameterError(f"signal has {y.size} samples, {need} needed for {n_sym} symbols")
    n_blocks = 2 * filt.overlap_factor
    blocks = y[: (n_sym + n_blocks - 1) * hop].reshape(-1, hop)
    fb = filt.coeffs.reshape(n_blocks, hop)
    folded = np.zeros((n_sym, M), dtype=complex)
    for j in range(n_blocks):
        half = (j % 2) * hop
        folded[:, half:half + hop] += blocks[j:j + n_sym] * fb[j]
    z = np.fft.fft(folded, axis=1).T
    m = np.arange(M)[:, None]
    n = np.arange(n_sym)[None, :]
    return z * np.exp(-1j * oqam_phase(m, n))


def basis_function(idx: BasisIndex, filt: PrototypeFilter) -> tuple[int, np.ndarray]:
    """Return ``(start, samples)`` of ``a_{m,n}``; support is ``start .. start + L_f - 1``."""
    start = idx.n * filt.hop
    return start, filt.modulated(idx.m) * np.exp(1j * oqam_phase(idx.m, idx.n))


def basis_inner_product(a: BasisIndex, b: BasisIndex, filt: PrototypeFilter) -> complex:
    """``<a_{m,n}, a_{m',n'}> = sum_l a_{m,n}[l] conj(a_{m',n'}[l])``."""
    sa, va = basis_function(a, filt)
    sb, vb = basis_function(b, filt)
    lo, hi = max(sa, sb), min(sa, sb) + filt.length
    if hi <= lo:
        return 0j
    return complex(np.sum(va[lo - sa:hi - sa] * np.conj(vb[lo - sb:hi - sb])))
