"""Multipath uplink channel: PDP models, Rayleigh tap generation, signal formation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError

__all__ = [
    "PdpModel",
    "ChannelSet",
    "exp_pdp",
    "draw_channels",
    "freq_response",
    "apply_uplink",
    "estimate_pdp",
    "noise_var_from_snr",
    "crandn",
]


@dataclass(frozen=True)
class PdpModel:
    """Normalised power delay profile ``p[l]`` (sums to one)."""

    taps: np.ndarray

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=float).ravel()
        if taps.size == 0:
            raise ParameterError("PDP must have at least one tap")
        if np.any(taps < 0):
            raise ParameterError("PDP taps must be non-negative")
        total = taps.sum()
        if total <= 0:
            raise ParameterError("PDP must have positive total power")
        taps = taps / total
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    def __len__(self):
        return self.taps.size

    def modulated(self, m: int, M: int) -> np.ndarray:
        """``p_{k,m}[l] = p[l] exp(j 2 pi l m / M)``."""
        ell = np.arange(self.taps.size)
        return self.taps * np.exp(2j * np.pi * ell * m / M)

    def dtft(self, omega) -> np.ndarray:
        """``P(omega) = sum_l p[l] exp(-j omega l)``."""
        omega = np.asarray(omega, dtype=float)
        ell = np.arange(self.taps.size)
        return np.exp(-1j * np.multiply.outer(omega, ell)) @ self.taps

    def dft(self, M: int) -> np.ndarray:
        """M-point DFT ``P[m]`` (zero padded or aliased as needed)."""
        return self.dtft(2 * np.pi * np.arange(M) / M)


def exp_pdp(alpha: float, length: int) -> PdpModel:
    """Exponentially decaying PDP ``p[l] ~ exp(-alpha l)``, ``l < length``."""
    if length < 1:
        raise ParameterError("PDP length must be at least 1")
    if alpha < 0:
        raise ParameterError("decay factor must be non-negative")
    return PdpModel(np.exp(-alpha * np.arange(length)))


@dataclass(frozen=True)
class ChannelSet:
    """Channel taps ``h_{i,k}[l]`` with shape ``(N, K, L_h)`` and receiver noise variance."""

    taps: np.ndarray
    noise_var: float = 0.0

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=complex)
        if taps.ndim != 3:
            raise ParameterError("channel taps must have shape (N, K, L_h)")
        if self.noise_var < 0:
            raise ParameterError("noise variance must be non-negative")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def shape(self):
        return self.taps.shape

    @property
    def num_antennas(self) -> int:
        return self.taps.shape[0]

    @property
    def num_terminals(self) -> int:
        return self.taps.shape[1]

    @property
    def length(self) -> int:
        return self.taps.shape[2]

    def subset(self, n_antennas: int) -> "ChannelSet":
        """First ``n_antennas`` antennas of this set."""
        return ChannelSet(self.taps[:n_antennas], self.noise_var)

    def __add__(self, other: "ChannelSet") -> "ChannelSet":
        return ChannelSet(self.taps + other.taps, self.noise_var)


def noise_var_from_snr(snr_db: float) -> float:
    """Unit transmit power convention: ``sigma^2 = 10^(-SNR/10)``."""
    return float(10.0 ** (-snr_db / 10.0))


def crandn(rng: np.random.Generator, shape, var=1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples, ``CN(0, var)``."""
    z = rng.standard_normal(tuple(np.atleast_1d(shape)) + (2,))
    return np.sqrt(np.asarray(var) / 2) * (z[..., 0] + 1j * z[..., 1])


def draw_channels(pdps, n_antennas: int, seed=None, noise_var: float = 0.0) -> ChannelSet:
    """Independent Rayleigh taps ``h_{i,k}[l] ~ CN(0, p_k[l])``.

    Antenna ``i`` draws only consume the random stream after antennas
    ``0 .. i-1``, so the first ``n`` antennas of a larger draw equal a draw
    with ``n_antennas = n`` from the same seed.
    """
    pdps = list(pdps)
    if not pdps:
        raise ParameterError("at least one PDP is required")
    if n_antennas < 1:
        raise ParameterError("need at least one antenna")
    lengths = {len(p) for p in pdps}
    if len(lengths) != 1:
        raise ParameterError("all PDPs must have the same length")
    prof = np.stack([p.taps for p in pdps])
    rng = np.random.default_rng(seed)
    taps = crandn(rng, (n_antennas,) + prof.shape, prof[None])
    return ChannelSet(taps, noise_var)


def freq_response(ch: ChannelSet, m: int, M: int) -> np.ndarray:
    """``H_m[i, k] = sum_l h_{i,k}[l] exp(-j 2 pi m l / M)``, shape ``(N, K)``."""
    if not 0 <= m < M:
        raise ParameterError(f"subcarrier index {m} outside [0, {M})")
    ell = np.arange(ch.length)
    return ch.taps @ np.exp(-2j * np.pi * m * ell / M)


def apply_uplink(signals, ch: ChannelSet, seed=None) -> np.ndarray:
    """Received antenna signals ``y_i = sum_k x_k * h_{i,k} + nu_i``.

    Returns an array of shape ``(N, L_x + L_h - 1)``.
    """
    x = np.atleast_2d(np.asarray(signals, dtype=complex))
    if x.shape[0] != ch.num_terminals:
        raise ParameterError(f"got {x.shape[0]} signals for {ch.num_terminals} terminals")
    n_out = x.shape[1] + ch.length - 1
    nfft = 1 << (n_out - 1).bit_length()
    X = np.fft.fft(x, nfft, axis=1)
    Hf = np.fft.fft(ch.taps, nfft, axis=2)
    y = np.fft.ifft(np.einsum("ikf,kf->if", Hf, X), axis=1)[:, :n_out]
    if ch.noise_var > 0:
        rng = np.random.default_rng(seed)
        y = y + crandn(rng, y.shape, ch.noise_var)
    return y


def estimate_pdp(ch: ChannelSet, k: int) -> PdpModel:
    """Sample PDP ``mean_i |h_{i,k}[l]|^2``, renormalised to unit sum."""
    return PdpModel(np.mean(np.abs(ch.taps[:, k, :]) ** 2, axis=0))
