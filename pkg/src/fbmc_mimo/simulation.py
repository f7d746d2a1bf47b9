"""Monte Carlo SINR measurement for FBMC and CP-OFDM massive-MIMO uplinks.

Two FBMC simulators are provided.  :func:`measure_trial` works at the
coefficient level: for one channel draw it forms the combined response
``g^{k,k'}`` exactly and maps it through the ``psi`` tables, which gives the
conditional powers of every interference term without generating symbols.
:func:`simulate_waveform` transmits random OQAM grids through the filter
banks and the multipath channel and measures the error empirically; it is
slower and serves as an oracle for the first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, apply_uplink, draw_channels, estimate_pdp, freq_response
from .combining import Combiner, CombinerKind, build_combiner, combine
from .equalizer import (
    FullRateEqualizer,
    LowRateEqualizer,
    design_lowrate,
    equalize_stream,
    modified_analysis_filter,
    stream_taps,
)
from .exceptions import NumericalRankError, ParameterError
from .filters import PrototypeFilter, analyze, oqam_phase, synthesize
from .theory import PsiTable, SinrValue, lowrate_noise_energy

__all__ = [
    "PowerSums",
    "combined_response",
    "coefficient_powers",
    "measure_trial",
    "lowrate_table_from_base",
    "ofdm_trial",
    "ofdm_modulate",
    "ofdm_demodulate",
    "WaveformResult",
    "simulate_waveform",
    "fullrate_chain",
    "lowrate_chain",
]


@dataclass
class PowerSums:
    """Accumulated signal, interference and noise powers over trials."""

    signal: float = 0.0
    self_interference: float = 0.0
    multiuser_interference: float = 0.0
    noise: float = 0.0
    count: int = 0

    def add(self, v: SinrValue) -> None:
        self.signal += v.signal_power
        self.self_interference += v.self_interference
        self.multiuser_interference += v.multiuser_interference
        self.noise += v.noise_power
        self.count += 1

    def value(self) -> SinrValue:
        c = max(self.count, 1)
        return SinrValue(self.signal / c, self.self_interference / c, self.multiuser_interference / c, self.noise / c)


def combined_response(W: Combiner, ch: ChannelSet, k: int) -> np.ndarray:
    """``g^{k,k'}[l] = sum_i conj(W[i,k]) h_{i,k'}[l]`` for all ``k'``, shape ``(K, L_h)``."""
    return np.einsum("i,ijl->jl", W.weights[:, k].conj(), ch.taps)


def coefficient_powers(table: PsiTable, g: np.ndarray, k: int, noise_var: float,
                       weight_energy: float) -> SinrValue:
    """Conditional powers for one realization of ``g`` (shape ``(K, L_h)``).

    Symbols are real with ``E[d^2] = 1/2`` and the noise is circular, so the
    ratio ``Re^2{G_sig} / (sum Re^2{G_int} + sigma^2 ||w||^2 E_chain)`` is the
    SINR of the real-part detector.
    """
    R = (table.flat_rows() @ g.T).real ** 2
    c = table.centre_flat
    signal = R[c, k]
    selfi = R[:, k].sum() - signal
    mui = R.sum() - R[:, k].sum()
    return SinrValue(float(signal), float(selfi), float(mui), float(noise_var * weight_energy * table.noise_energy))


def lowrate_table_from_base(base: PsiTable, filt: PrototypeFilter, eq: LowRateEqualizer) -> PsiTable:
    """Apply a low-rate equalizer to an unequalized table (lags must cover the shift)."""
    c = stream_taps(eq, base.m)
    rows0 = base.rows
    rows = np.zeros_like(rows0)
    for cj, j in zip(c, eq.lags):
        if j >= 0:
            rows[:, j:] += cj * rows0[:, :rows0.shape[1] - j]
        else:
            rows[:, :j] += cj * rows0[:, -j:]
    return PsiTable(rows, base.dm, base.dn, base.m, lowrate_noise_energy(filt, eq, base.m), "lowrate")


def _draw_with_retry(pdps, n_max, seed_seq: np.random.SeedSequence, noise_var, check, max_retries=10):
    """Draw channels; redraw from a fresh child seed while ``check`` raises a rank error."""
    retries = 0
    seq = seed_seq
    while True:
        ch = draw_channels(pdps, n_max, np.random.default_rng(seq), noise_var)
        try:
            check(ch)
            return ch, retries
        except NumericalRankError:
            retries += 1
            if retries > max_retries:
                raise
            seq = seq.spawn(1)[0]


def measure_trial(seed_seq: np.random.SeedSequence, pdps, filt: PrototypeFilter, m: int, k: int,
                  antennas, kinds, noise_vars, tables: dict, pdp_source: str = "true",
                  base_table: PsiTable | None = None, n_eq_taps: int = 9):
    """Coefficient-level SINR components for one channel draw.

    Parameters
    ----------
    seed_seq : SeedSequence
        Per-trial seed; antennas ``0 .. max(antennas)-1`` are drawn once and
        prefixes reused for smaller ``N``.
    tables : dict
        ``{equalizer_state: PsiTable}``.  With ``pdp_source="estimated"`` the
        ``"lowrate"`` entry is replaced per ``N`` by an equalizer designed from
        the sample PDP, built on ``base_table`` (which must have guard lags).

    Returns
    -------
    values : dict
        ``{(N, kind, snr_index, state): SinrValue}``
    retries : int
        Number of redraws caused by numerically singular ZF Gram matrices.
    """
    kinds = [CombinerKind(x) for x in kinds]
    antennas = list(antennas)
    n_max = max(antennas)
    M = filt.M

    def check(ch):
        if CombinerKind.ZF in kinds:
            for N in antennas:
                build_combiner(freq_response(ch.subset(N), m, M), CombinerKind.ZF)

    ch_all, retries = _draw_with_retry(pdps, n_max, seed_seq, 0.0, check)
    out = {}
    for N in antennas:
        ch = ch_all.subset(N)
        H = freq_response(ch, m, M)
        local = dict(tables)
        if pdp_source == "estimated" and "lowrate" in local:
            eq = design_lowrate(estimate_pdp(ch, k), M, n_taps=n_eq_taps, filt=filt, terminal=k)
            local["lowrate"] = lowrate_table_from_base(base_table, filt, eq)
        for kind in kinds:
            cached = None
            for si, s2 in enumerate(noise_vars):
                if kind is CombinerKind.MMSE or cached is None:
                    W = build_combiner(H, kind, s2, m)
                    g = combined_response(W, ch, k)
                    cached = (W, g)
                W, g = cached
                e = float(W.column_energy[k])
                for state, tab in local.items():
                    out[(N, kind.value, si, state)] = coefficient_powers(tab, g, k, s2, e)
    return out, retries


def ofdm_trial(seed_seq: np.random.SeedSequence, pdps, num_subcarriers: int, cp_length: int, m: int, k: int,
               antennas, kinds, noise_vars):
    """Per-subcarrier flat-fading SINR components for CP-OFDM (one draw).

    With ``cp_length >= L_h - 1`` the subcarrier channel is exactly ``H_m``
    and the only disturbances are multiuser interference and noise.
    """
    L_h = len(pdps[0])
    if cp_length < L_h - 1:
        raise ParameterError(f"cyclic prefix {cp_length} shorter than channel memory {L_h - 1}")
    kinds = [CombinerKind(x) for x in kinds]
    ch_all = draw_channels(pdps, max(antennas), np.random.default_rng(seed_seq))
    out = {}
    for N in antennas:
        H = freq_response(ch_all.subset(N), m, num_subcarriers)
        for kind in kinds:
            for si, s2 in enumerate(noise_vars):
                W = build_combiner(H, kind, s2, m)
                a = W.weights[:, k].conj() @ H
                sig = float(np.abs(a[k]) ** 2)
                mui = float(np.sum(np.abs(a) ** 2) - sig)
                out[(N, kind.value, si)] = SinrValue(sig, 0.0, mui, float(s2 * W.column_energy[k]))
    return out


def ofdm_modulate(grid, cp_length: int) -> np.ndarray:
    """CP-OFDM symbols from a ``(M, N_sym)`` complex grid (unitary IFFT)."""
    X = np.asarray(grid)
    M = X.shape[0]
    x = np.fft.ifft(X, axis=0) * np.sqrt(M)
    return np.concatenate([x[M - cp_length:], x], axis=0).T.reshape(-1)


def ofdm_demodulate(signal, M: int, cp_length: int, n_sym: int) -> np.ndarray:
    """Inverse of :func:`ofdm_modulate` after CP removal (unitary FFT)."""
    y = np.asarray(signal)[: n_sym * (M + cp_length)].reshape(n_sym, M + cp_length)
    return np.fft.fft(y[:, cp_length:], axis=1).T / np.sqrt(M)


def lowrate_chain(rx_signals, filt: PrototypeFilter, W: Combiner, eq: LowRateEqualizer | None, k: int,
                  n_sym: int) -> np.ndarray:
    """Analysis per antenna, combining, then the symbol-rate equalizer.

    Returns the complex stream for terminal ``k`` on subcarrier ``W.subcarrier``.
    """
    m = W.subcarrier
    ys = np.stack([analyze(y, filt, n_sym)[m] for y in rx_signals])
    z = combine(W, ys)[k]
    return z if eq is None else equalize_stream(z, eq, m)


def fullrate_chain(rx_signals, filt: PrototypeFilter, W: Combiner, eq: FullRateEqualizer | None, k: int,
                   n_sym: int) -> np.ndarray:
    """Combining and the sample-rate equalizer ahead of decimation.

    The combined signal passes the modified receive filter
    ``f_m^*[-l] * phi_{k,m}[l]``, is sampled every ``M/2`` samples and phase
    compensated.
    """
    m = W.subcarrier
    rx, zero = modified_analysis_filter(filt, eq, m)
    x = W.weights[:, k].conj() @ np.asarray(rx_signals)
    y = np.convolve(x, rx)
    n = np.arange(n_sym)
    pos = zero + n * filt.hop
    vals = np.where(pos < y.size, y[np.minimum(pos, y.size - 1)], 0)
    return vals * np.exp(-1j * oqam_phase(m, n))


@dataclass(frozen=True)
class WaveformResult:
    """Empirical SINR of the real-part detector and the per-symbol outputs."""

    sinr: float
    gain: float
    outputs: np.ndarray
    symbols: np.ndarray

    @property
    def sinr_db(self) -> float:
        return float(10 * np.log10(self.sinr))


def _transmit(pdps, filt, ch, n_sym, rng):
    K = len(pdps)
    data = np.sqrt(0.5) * np.sign(rng.standard_normal((K, filt.M, n_sym)))
    x = np.stack([synthesize(d, filt) for d in data])
    y = apply_uplink(x, ch, rng)
    return data, y


def simulate_waveform(pdps, filt: PrototypeFilter, ch: ChannelSet, m: int, k: int, kind, n_sym: int = 64,
                      equalizer=None, guard: int | None = None, seed=None, chain: str = "lowrate") -> WaveformResult:
    """Waveform-level link: random binary OQAM grids, filter banks, multipath, noise.

    The estimate is the real part of the combined (and equalized) output;
    the SINR is ``E[d^2] / E[(Re z - d)^2]`` over interior symbols, with the
    deterministic wanted-symbol gain left in place (no bias correction), so
    it is directly comparable with the coefficient-level SINR scaled by the
    measured gain.
    """
    rng = np.random.default_rng(seed)
    data, y = _transmit(pdps, filt, ch, n_sym, rng)
    H = freq_response(ch, m, filt.M)
    W = build_combiner(H, kind, ch.noise_var, m)
    if chain == "lowrate":
        z = lowrate_chain(y, filt, W, equalizer, k, n_sym)
    elif chain == "fullrate":
        z = fullrate_chain(y, filt, W, equalizer, k, n_sym)
    else:
        raise ParameterError(f"unknown chain {chain!r}")
    if guard is None:
        guard = 2 * filt.overlap_factor + 8
    sl = slice(guard, n_sym - guard)
    d = data[k, m, sl]
    est = z[sl].real
    gain = float(np.dot(est, d) / np.dot(d, d))
    err = est - gain * d
    sinr = float(gain ** 2 * np.mean(d ** 2) / np.mean(err ** 2))
    return WaveformResult(sinr, gain, z, data[k, m])
