"""Closed-form SINR machinery for FBMC massive-MIMO uplink.

The interference coefficient from symbol ``(k', m', n')`` to the output of
terminal ``k`` at ``(m, n)`` factors as ``psi^H g^{k,k'}`` where ``g`` is
the combined multipath response (random, length ``L_h``) and ``psi``
collects the deterministic filtering, decimation and phase compensation.
This module tabulates ``psi^H`` over a finite interference window, gives the
first and second order statistics of ``g`` for MRC and ZF, and evaluates
the resulting average-power SINR.

Powers are in natural units (no factor ``N`` pulled out), so
``signal / (self + mui + noise)`` is the SINR directly.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .channel import ChannelSet, PdpModel
from .combining import Combiner, CombinerKind
from .equalizer import (
    FullRateEqualizer,
    LowRateEqualizer,
    modified_analysis_filter,
    stream_taps,
)
from .exceptions import DomainError, ParameterError, WindowError
from .filters import PrototypeFilter, oqam_phase

__all__ = [
    "EquivChannel",
    "PsiTable",
    "PsiOperator",
    "GStats",
    "SinrValue",
    "equiv_channel_asymptotic",
    "saturation_sinr",
    "build_psi",
    "build_psi_table",
    "g_stats",
    "real_covariance",
    "sinr_theory",
    "mrc_sinr_theory",
    "zf_sinr_theory",
    "flattening_response",
    "sinr_record",
    "DEFAULT_SUBCARRIER_SPAN",
]

DEFAULT_SUBCARRIER_SPAN = 2


def _db(x):
    with np.errstate(divide="ignore"):
        return 10 * np.log10(x)


@dataclass(frozen=True)
class SinrValue:
    """Average powers of the wanted symbol and the three disturbance classes."""

    signal_power: float
    self_interference: float
    multiuser_interference: float
    noise_power: float

    @property
    def sinr(self) -> float:
        den = self.self_interference + self.multiuser_interference + self.noise_power
        return float(self.signal_power / den) if den > 0 else float("inf")

    @property
    def sinr_db(self) -> float:
        return float(_db(self.sinr))

    def as_dict(self) -> dict:
        d = asdict(self)
        d["sinr_db"] = self.sinr_db
        return d


@dataclass(frozen=True)
class EquivChannel:
    """Symbol-rate response ``g_{mm'}[n]`` on the lags ``lags``."""

    values: np.ndarray
    lags: np.ndarray
    m: int
    m_prime: int

    def at(self, n: int) -> complex:
        idx = np.flatnonzero(self.lags == n)
        return complex(self.values[idx[0]]) if idx.size else 0j

    def coefficients(self) -> np.ndarray:
        """``G_{mm',nn'} = g[n - n'] exp(j(theta_{m',n'} - theta_{m,n}))`` indexed by ``n - n'``."""
        dm = self.m_prime - self.m
        return self.values * np.exp(1j * oqam_phase(dm, -self.lags))


def _full_conv_support(len_a: int, len_b: int) -> int:
    return len_a + len_b - 1


def equiv_channel_asymptotic(pdp: PdpModel, filt: PrototypeFilter, m: int, m_prime: int,
                             equalizer: FullRateEqualizer | None = None) -> EquivChannel:
    """Asymptotic combined response ``(f_{m'} * p_{k,m} * f_m^*[-.])`` decimated by ``M/2``.

    With ``equalizer`` the cascade additionally contains ``phi_{k,m}``, and
    the response tends to ``(f_{m'} * f_m^*[-.])`` decimated.
    """
    rx, zero = modified_analysis_filter(filt, equalizer, m)
    chain = np.convolve(np.convolve(filt.modulated(m_prime), pdp.modulated(m, filt.M)), rx)
    hop = filt.hop
    lo = -(zero // hop)
    hi = (chain.size - 1 - zero) // hop
    lags = np.arange(lo, hi + 1)
    return EquivChannel(chain[zero + lags * hop], lags, m, m_prime)


def saturation_sinr(pdp: PdpModel, filt: PrototypeFilter, m: int, span: int = DEFAULT_SUBCARRIER_SPAN,
                    equalizer: FullRateEqualizer | None = None) -> SinrValue:
    """Asymptotic (N -> infinity) SINR limited by residual ISI/ICI of one terminal.

    ``Re^2{G_{mm,nn}} / sum_{(m',n') != (m,n)} Re^2{G_{mm',nn'}}``; noise and
    multiuser interference vanish in the limit.
    """
    signal = 0.0
    interference = 0.0
    for dm in range(-span, span + 1):
        g = equiv_channel_asymptotic(pdp, filt, m, (m + dm) % filt.M, equalizer)
        # phase uses the unwrapped offset dm (M is a multiple of 4 in practice)
        G = g.values * np.exp(1j * oqam_phase(dm, -g.lags))
        r2 = G.real ** 2
        if dm == 0:
            centre = np.flatnonzero(g.lags == 0)[0]
            signal = r2[centre]
            interference += r2.sum() - signal
        else:
            interference += r2.sum()
    return SinrValue(float(signal), float(interference), 0.0, 0.0)


@dataclass(frozen=True)
class PsiOperator:
    """``psi^H`` row for one ``(m', n - n')`` and, optionally, its Toeplitz factors."""

    row: np.ndarray
    m: int
    m_prime: int
    delta_n: int
    synthesis_matrix: np.ndarray | None = None
    analysis_matrix: np.ndarray | None = None
    selector: np.ndarray | None = None

    @property
    def psi(self) -> np.ndarray:
        return np.conj(self.row)


def _toeplitz_conv(h: np.ndarray, n_cols: int) -> np.ndarray:
    """Convolution matrix ``T`` with ``T @ x == np.convolve(h, x)`` for ``len(x) == n_cols``."""
    rows = h.size + n_cols - 1
    T = np.zeros((rows, n_cols), dtype=complex)
    for c in range(n_cols):
        T[c:c + h.size, c] = h
    return T


def build_psi(filt: PrototypeFilter, m: int, m_prime: int, delta_n: int, channel_length: int,
              equalizer: FullRateEqualizer | None = None, explicit: bool = False) -> PsiOperator:
    """``psi^H = exp(j dtheta) e^T Ft F_{m'}`` for the full-rate receive chain.

    ``F_{m'}`` is the ``(L_f + L_h - 1) x L_h`` convolution matrix of
    ``f_{m'}``, ``Ft`` the convolution matrix of the receive filter
    ``f_m^*[-l] * phi_{k,m}[l]`` and ``e`` selects the output at lag
    ``delta_n M/2``.  With ``explicit=True`` the three factors are formed and
    returned; otherwise the row is computed by direct convolution.

    Raises
    ------
    WindowError
        If ``delta_n M/2`` falls outside the selector range.
    """
    rx, zero = modified_analysis_filter(filt, equalizer, m)
    n_mid = filt.length + channel_length - 1
    n_out = rx.size + n_mid - 1
    pos = zero + delta_n * filt.hop
    if not 0 <= pos < n_out:
        raise WindowError(f"delta_n={delta_n} outside the support of the receive chain")
    phase = np.exp(1j * (oqam_phase(m_prime, 0) - oqam_phase(m, delta_n)))
    fm = filt.modulated(m_prime)
    if explicit:
        F = _toeplitz_conv(fm, channel_length)
        Ft = _toeplitz_conv(rx, n_mid)
        e = np.zeros(n_out)
        e[pos] = 1.0
        row = phase * (e @ Ft @ F)
        return PsiOperator(row, m, m_prime, delta_n, F, Ft, e)
    c = np.convolve(rx, fm)
    idx = pos - np.arange(channel_length)
    ok = (idx >= 0) & (idx < c.size)
    row = np.zeros(channel_length, dtype=complex)
    row[ok] = phase * c[idx[ok]]
    return PsiOperator(row, m, m_prime, delta_n)


@dataclass(frozen=True)
class PsiTable:
    """``psi^H`` rows for every interferer offset in the window of target ``(k, m)``.

    ``rows[a, b]`` belongs to subcarrier offset ``dm[a]`` and symbol lag
    ``n - n' = dn[b]``.  ``noise_energy`` is the energy of the receive chain's
    noise response (``||f~||^2`` for the full-rate chain).
    """

    rows: np.ndarray
    dm: np.ndarray
    dn: np.ndarray
    m: int
    noise_energy: float
    chain: str = "none"

    @property
    def centre(self) -> tuple[int, int]:
        return int(np.flatnonzero(self.dm == 0)[0]), int(np.flatnonzero(self.dn == 0)[0])

    def flat_rows(self) -> np.ndarray:
        return self.rows.reshape(-1, self.rows.shape[-1])

    @property
    def centre_flat(self) -> int:
        a, b = self.centre
        return a * self.dn.size + b

    def coefficients(self, g: np.ndarray) -> np.ndarray:
        """Complex coefficients ``psi^H g`` for every offset; ``g`` may be batched (..., L_h)."""
        return np.einsum("abl,...l->...ab", self.rows, g)


def _base_rows(filt: PrototypeFilter, m: int, L_h: int, span: int, rx_eq: FullRateEqualizer | None,
               extra: int = 0):
    rx, zero = modified_analysis_filter(filt, rx_eq, m)
    hop = filt.hop
    c_len = rx.size + filt.length - 1
    dn_lo = -((zero + L_h) // hop) - 1 - extra
    dn_hi = (c_len - 1 - zero + L_h) // hop + 1 + extra
    dn = np.arange(dn_lo, dn_hi + 1)
    dms = np.arange(-span, span + 1)
    rows = np.zeros((dms.size, dn.size, L_h), dtype=complex)
    ell = np.arange(L_h)
    for a, dm in enumerate(dms):
        c = np.convolve(rx, filt.modulated((m + dm) % filt.M))
        idx = zero + dn[:, None] * hop - ell[None, :]
        ok = (idx >= 0) & (idx < c.size)
        vals = np.zeros(idx.shape, dtype=complex)
        vals[ok] = c[idx[ok]]
        phase = np.exp(1j * oqam_phase(dm, -dn))
        rows[a] = phase[:, None] * vals
    return rows, dms, dn, float(np.sum(np.abs(rx) ** 2))


def _trim(rows: np.ndarray, dn: np.ndarray, tol: float = 0.0):
    keep = np.flatnonzero(np.any(np.abs(rows) > tol, axis=(0, 2)) | (dn == 0))
    lo, hi = keep.min(), keep.max()
    return rows[:, lo:hi + 1], dn[lo:hi + 1]


def lowrate_noise_energy(filt: PrototypeFilter, eq: LowRateEqualizer, m: int) -> float:
    """``||sum_j c_j^* a_{m,-j}||^2``: noise gain of analysis followed by the low-rate equalizer."""
    c = stream_taps(eq, m)
    hop = filt.hop
    lags = eq.lags
    start = -lags.max() * hop
    v = np.zeros((lags.max() - lags.min()) * hop + filt.length, dtype=complex)
    fm = filt.modulated(m)
    for cj, j in zip(c, lags):
        off = -j * hop - start
        v[off:off + filt.length] += np.conj(cj) * fm * np.exp(1j * oqam_phase(m, -j))
    return float(np.sum(np.abs(v) ** 2))


def build_psi_table(filt: PrototypeFilter, m: int, channel_length: int,
                    equalizer: FullRateEqualizer | LowRateEqualizer | None = None,
                    span: int = DEFAULT_SUBCARRIER_SPAN, guard: int = 0) -> PsiTable:
    """Tabulate ``psi^H`` over ``|m' - m| <= span`` and every symbol lag in the support.

    ``equalizer`` selects the receive chain: ``None`` (plain analysis),
    a :class:`FullRateEqualizer` (equalizer ahead of decimation) or a
    :class:`LowRateEqualizer` (equalizer after decimation and combining).
    ``guard`` pads an unequalized table with zero lags on both sides so a
    low-rate equalizer of half-length ``guard`` can be applied to it later.
    """
    if isinstance(equalizer, LowRateEqualizer):
        h = (equalizer.taps.size - 1) // 2
        rows0, dms, dn0, _ = _base_rows(filt, m, channel_length, span, None, extra=h)
        c = stream_taps(equalizer, m)
        rows = np.zeros_like(rows0)
        for cj, j in zip(c, equalizer.lags):
            # out[dn] += c_j * rows0[dn - j]
            if j >= 0:
                rows[:, j:] += cj * rows0[:, :rows0.shape[1] - j]
            else:
                rows[:, :j] += cj * rows0[:, -j:]
        rows, dn = _trim(rows, dn0)
        return PsiTable(rows, dms, dn, m, lowrate_noise_energy(filt, equalizer, m), "lowrate")
    rows, dms, dn, energy = _base_rows(filt, m, channel_length, span, equalizer, extra=guard)
    if guard == 0:
        rows, dn = _trim(rows, dn)
    return PsiTable(rows, dms, dn, m, energy, "none" if equalizer is None else "fullrate")


@dataclass(frozen=True)
class GStats:
    """Mean, covariance and pseudo-covariance of the combined response ``g_m^{k,k'}``."""

    mean: np.ndarray
    cov: np.ndarray
    pseudo_cov: np.ndarray
    kind: CombinerKind
    k: int
    k_prime: int

    @property
    def real_cov(self) -> np.ndarray:
        return real_covariance(self.cov, self.pseudo_cov)


def real_covariance(cov: np.ndarray, pseudo_cov: np.ndarray) -> np.ndarray:
    """Covariance of ``[Re g; Im g]`` from the complex covariance and pseudo-covariance."""
    G, K = cov, pseudo_cov
    return 0.5 * np.block([[np.real(G + K), np.imag(-G + K)], [np.imag(G + K), np.real(G - K)]])


def g_stats(pdps, kind, m: int, M: int, k: int, k_prime: int, n_antennas: int) -> GStats:
    """Closed-form statistics of ``g_m^{k,k'}``.

    MRC (``W = H/N``): mean ``delta p_{k,m}``, covariance ``D_{p_k'}/N``,
    pseudo-covariance ``delta p_{k,m} p_{k,m}^T / N``.
    ZF (``N >= K+1``): mean ``delta p_{k,m}``, covariance
    ``(D_{p_k'} - p_{k',m} p_{k',m}^H)/(N-K)``, pseudo-covariance zero.
    """
    pdps = list(pdps)
    kind = CombinerKind(kind)
    K = len(pdps)
    N = n_antennas
    p_kp = pdps[k_prime].modulated(m, M)
    D = np.diag(pdps[k_prime].taps).astype(complex)
    mean = p_kp.copy() if k == k_prime else np.zeros_like(p_kp)
    if kind is CombinerKind.MRC:
        cov = D / N
        pseudo = np.outer(p_kp, p_kp) / N if k == k_prime else np.zeros_like(D)
    elif kind is CombinerKind.ZF:
        if N < K + 1:
            raise DomainError(f"ZF statistics need N >= K+1 (N={N}, K={K})")
        cov = (D - np.outer(p_kp, p_kp.conj())) / (N - K)
        pseudo = np.zeros_like(D)
    else:
        raise DomainError("closed-form statistics exist only for MRC and ZF")
    return GStats(mean, cov, pseudo, kind, k, k_prime)


def _mean_combiner_energy(kind: CombinerKind, N: int, K: int) -> float:
    """``E||w_{m,k}||^2``: ``1/N`` for the N-normalised MRC, ``1/(N-K)`` for ZF."""
    return 1.0 / N if kind is CombinerKind.MRC else 1.0 / (N - K)


def sinr_theory(pdps, filt: PrototypeFilter, table: PsiTable, kind, k: int, n_antennas: int,
                noise_var: float) -> SinrValue:
    """Average-power SINR for MRC or ZF over the window of ``table``.

    Each coefficient power is ``tr{C Psi} + Re^2{psi^H mu}``.  With an exact
    equalizer the mean term reduces to ``delta_{mm'} delta_{nn'}`` and the
    expression is the familiar closed form; without one it retains the
    residual ISI/ICI that causes saturation.  Noise power is
    ``sigma^2 E||w||^2`` times the noise energy of the receive chain.
    """
    pdps = list(pdps)
    kind = CombinerKind(kind)
    K = len(pdps)
    N = n_antennas
    if kind is CombinerKind.ZF and N < K + 1:
        raise DomainError(f"ZF SINR needs N >= K+1 (N={N}, K={K})")
    rows = table.flat_rows()
    psi_check = np.concatenate([rows.real, -rows.imag], axis=1)
    centre = table.centre_flat
    signal = selfi = mui = 0.0
    for kp in range(K):
        st = g_stats(pdps, kind, table.m, filt.M, k, kp, N)
        C = st.real_cov
        fluct = np.einsum("ai,ij,aj->a", psi_check, C, psi_check)
        mean_term = (rows @ st.mean).real ** 2
        power = fluct + mean_term
        if kp == k:
            signal = power[centre]
            selfi = power.sum() - signal
        else:
            mui += power.sum()
    noise = noise_var * _mean_combiner_energy(kind, N, K) * table.noise_energy
    return SinrValue(float(signal), float(selfi), float(mui), float(noise))


def mrc_sinr_theory(pdps, filt: PrototypeFilter, table: PsiTable, k: int, n_antennas: int,
                    noise_var: float) -> SinrValue:
    """Closed-form MRC SINR (see :func:`sinr_theory`)."""
    return sinr_theory(pdps, filt, table, CombinerKind.MRC, k, n_antennas, noise_var)


def zf_sinr_theory(pdps, filt: PrototypeFilter, table: PsiTable, k: int, n_antennas: int,
                   noise_var: float) -> SinrValue:
    """Closed-form ZF SINR, valid for ``N >= K + 1``."""
    return sinr_theory(pdps, filt, table, CombinerKind.ZF, k, n_antennas, noise_var)


def flattening_response(ch: ChannelSet, W: Combiner, pdp: PdpModel, k: int, m: int, M: int, omega,
                        equalized: bool = False) -> np.ndarray:
    """Combined channel seen by terminal ``k`` on subcarrier ``m``.

    ``C(w) = sum_i conj(W[i,k]) H_{i,k}(w)``; with MRC weights this is
    ``(1/D) sum_i conj(H_m^{i,k}) H_{i,k}(w)``.  When ``equalized`` the
    result is divided by ``P_{k,m}(w) = P_k(w - 2 pi m / M)``.
    """
    omega = np.asarray(omega, dtype=float)
    lo, hi = 2 * np.pi * (m - 1) / M, 2 * np.pi * (m + 1) / M
    if np.any(omega < lo - 1e-12) or np.any(omega > hi + 1e-12):
        raise ParameterError("omega grid must lie inside the passband of subcarrier m")
    ell = np.arange(ch.length)
    Hw = ch.taps[:, k, :] @ np.exp(-1j * np.outer(ell, omega))
    C = W.weights[:, k].conj() @ Hw
    if equalized:
        C = C / pdp.dtft(omega - 2 * np.pi * m / M)
    return C


def sinr_record(config: dict, m: int, n: int, k: int, value: SinrValue) -> str:
    """JSON record ``{config, m, n, k, components, sinr_db}``."""
    comp = value.as_dict()
    sinr_db = comp.pop("sinr_db")
    return json.dumps({"config": config, "m": m, "n": n, "k": k, "components": comp, "sinr_db": sinr_db})
