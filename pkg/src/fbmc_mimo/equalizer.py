"""PDP-inverting equalizer: full-rate per-antenna form and low-rate post-combining form.

Taps are stored centred: ``taps[i]`` belongs to lag ``lags[i]`` with
``lags = -(L-1)/2 .. (L-1)/2``, so linear-phase designs carry no extra delay
and symbol indices of equalized and unequalized chains line up.

The low-rate filter ``phit[n]`` has DTFT ``1 / P(2 w / M)`` on ``|w| <= pi``;
for subcarrier ``m`` it is applied as ``phit[n] exp(j pi m n)`` to the decimated
matched-filter output (before OQAM phase compensation).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .channel import PdpModel
from .exceptions import IllConditionedPdpError, ParameterError
from .filters import PrototypeFilter, design_phydyas

__all__ = [
    "FullRateEqualizer",
    "LowRateEqualizer",
    "design_lowrate",
    "design_fullrate",
    "lowrate_from_fullrate",
    "equalize_stream",
    "stream_taps",
    "modified_analysis_filter",
    "lowrate_residual",
    "fullrate_residual",
    "equalizer_to_json",
    "equalizer_from_json",
    "MIN_PDP_RESPONSE",
]

MIN_PDP_RESPONSE = 1e-6


def _centered_lags(n_taps: int) -> np.ndarray:
    h = (n_taps - 1) // 2
    return np.arange(-h, h + 1)


@dataclass(frozen=True)
class LowRateEqualizer:
    """Half-symbol-rate taps ``phit_k[n]`` (centred, odd length)."""

    taps: np.ndarray
    terminal: int = 0

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=complex).ravel()
        if taps.size % 2 == 0:
            raise ParameterError("equalizer length must be odd")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def lags(self) -> np.ndarray:
        return _centered_lags(self.taps.size)

    def response(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        return np.exp(-1j * np.multiply.outer(omega, self.lags)) @ self.taps


@dataclass(frozen=True)
class FullRateEqualizer:
    """Sample-rate taps ``phi_{k,m}[l]`` (centred, odd length) for subcarrier ``m``."""

    taps: np.ndarray
    subcarrier: int = 0
    num_subcarriers: int = 0
    terminal: int = 0

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=complex).ravel()
        if taps.size % 2 == 0:
            raise ParameterError("equalizer length must be odd")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def lags(self) -> np.ndarray:
        return _centered_lags(self.taps.size)

    def response(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        return np.exp(-1j * np.multiply.outer(omega, self.lags)) @ self.taps

    def baseband(self) -> "FullRateEqualizer":
        """Demodulated copy ``phi_k = phi_{k,0}``."""
        if self.subcarrier == 0:
            return self
        ph = np.exp(-2j * np.pi * self.subcarrier * self.lags / self.num_subcarriers)
        return FullRateEqualizer(self.taps * ph, 0, self.num_subcarriers, self.terminal)


def _check_band(pdp: PdpModel, M: int):
    nu = np.linspace(-2 * np.pi / M, 2 * np.pi / M, 513)
    if np.min(np.abs(pdp.dtft(nu))) < MIN_PDP_RESPONSE:
        raise IllConditionedPdpError("PDP spectrum has a near-zero inside the subcarrier band")


def design_lowrate(pdp: PdpModel, M: int, n_taps: int = 9, filt: PrototypeFilter | None = None,
                   method: str = "wls", terminal: int = 0) -> LowRateEqualizer:
    """Design the low-rate equalizer ``phit_k`` approximating ``1/P_k(2w/M)``.

    Parameters
    ----------
    pdp : PdpModel
    M : int
        Number of subcarriers.
    n_taps : int
        Odd number of half-symbol-rate taps.
    filt : PrototypeFilter, optional
        Prototype whose power response ``|F(2w/M)|^2`` weights the fit;
        defaults to PHYDYAS with overlap 4.
    method : {"wls", "fsamp"}
        ``"wls"`` is a prototype-weighted least-squares fit on a dense grid.
        ``"fsamp"`` is plain frequency sampling at ``n_taps`` uniform
        points; it cannot follow the phase jump of ``1/P`` at the band edge
        and is kept for comparison only.
    """
    if n_taps < 1 or n_taps % 2 == 0:
        raise ParameterError("n_taps must be a positive odd number")
    _check_band(pdp, M)
    lags = _centered_lags(n_taps)
    if method == "fsamp":
        omega = 2 * np.pi * lags / n_taps
        desired = 1.0 / pdp.dtft(2 * omega / M)
        taps = np.exp(1j * np.outer(lags, omega)) @ desired / n_taps
    elif method == "wls":
        if filt is None:
            filt = design_phydyas(M, 4)
        omega = np.linspace(-np.pi, np.pi, max(64 * n_taps, 1024), endpoint=False)
        P = pdp.dtft(2 * omega / M)
        w = np.abs(filt.frequency_response(2 * omega / M))
        A = np.exp(-1j * np.outer(omega, lags)) * (P * w)[:, None]
        taps = np.linalg.lstsq(A, w.astype(complex), rcond=None)[0]
    else:
        raise ParameterError(f"unknown design method {method!r}")
    return LowRateEqualizer(taps, terminal)


def design_fullrate(pdp: PdpModel, m: int, M: int, n_taps: int | None = None,
                    rolloff: float = 1.0, terminal: int = 0) -> FullRateEqualizer:
    """Band-limited FIR inverse of ``P_{k,m}`` valid on the passband of subcarrier ``m``.

    The target is ``1 + c(nu) (1/P_k(nu) - 1)`` where the weight ``c`` is one
    on ``|nu| <= 2 pi/M`` and falls to zero with a raised-cosine over the
    next ``rolloff * 2 pi / M``, so the response equals ``1/P_k`` in band and
    a flat PDP gives a unit impulse.  The target is sampled on a fine FFT
    grid, truncated to ``n_taps`` centred taps and modulated to subcarrier
    ``m``.  Default length is ``8 M + 1``.
    """
    if n_taps is None:
        n_taps = 8 * M + 1
    if n_taps % 2 == 0:
        raise ParameterError("n_taps must be odd")
    _check_band(pdp, M)
    nfft = 1 << int(np.ceil(np.log2(16 * n_taps)))
    nu = 2 * np.pi * np.fft.fftfreq(nfft)
    edge = 2 * np.pi / M
    x = np.clip((np.abs(nu) - edge) / (rolloff * edge), 0.0, 1.0)
    taper = 0.5 * (1 + np.cos(np.pi * x))
    desired = np.ones(nfft, dtype=complex)
    keep = taper > 0
    P = pdp.dtft(nu[keep])
    if np.min(np.abs(P)) < MIN_PDP_RESPONSE:
        raise IllConditionedPdpError("PDP spectrum has a near-zero inside the roll-off band")
    desired[keep] += taper[keep] * (1.0 / P - 1.0)
    h = np.fft.ifft(desired)
    lags = _centered_lags(n_taps)
    taps = h[lags % nfft]
    taps = taps * np.exp(2j * np.pi * m * lags / M)
    return FullRateEqualizer(taps, m, M, terminal)


def _sinc_lowpass(M: int, halfwidth: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated ``sinc(2l/M)``, raised-cosine tapered over the last 10 % of its support."""
    span = max(int(halfwidth * M), 1)
    lags = np.arange(-span, span + 1)
    s = np.sinc(2 * lags / M)
    r = np.abs(lags) / span
    edge = 0.9
    taper = np.where(r <= edge, 1.0, 0.5 * (1 + np.cos(np.pi * (r - edge) / (1 - edge))))
    return lags, s * taper


def lowrate_from_fullrate(eq: FullRateEqualizer, M: int, sinc_halfwidth: int = 8,
                          n_taps: int | None = None) -> LowRateEqualizer:
    """``phit[n] = (phi * sinc(2l/M))`` decimated by ``M/2`` (cross-check oracle).

    ``n_taps`` trims the result to the given centred length; by default
    every lag inside the combined support is kept.
    """
    base = eq.baseband()
    s_lags, s = _sinc_lowpass(M, sinc_halfwidth)
    full = np.convolve(base.taps, s)
    first = base.lags[0] + s_lags[0]
    hop = M // 2
    n_max = (-first) // hop
    out_lags = np.arange(-n_max, n_max + 1)
    taps = full[out_lags * hop - first]
    if n_taps is not None:
        if n_taps % 2 == 0:
            raise ParameterError("n_taps must be odd")
        h = (n_taps - 1) // 2
        if h <= n_max:
            taps = taps[n_max - h:n_max + h + 1]
        else:
            taps = np.pad(taps, h - n_max)
    return LowRateEqualizer(taps, eq.terminal)


def stream_taps(eq: LowRateEqualizer, m: int) -> np.ndarray:
    """Taps applied to a phase-compensated combined stream at subcarrier ``m``.

    The filter ``phit[n] exp(j pi m n)`` acts before OQAM phase compensation;
    moving it after compensation multiplies tap ``n`` by ``exp(-j pi n / 2)``.
    """
    n = eq.lags
    return eq.taps * np.exp(1j * np.pi * m * n) * np.exp(-0.5j * np.pi * n)


def equalize_stream(stream, eq: LowRateEqualizer, m: int) -> np.ndarray:
    """Filter a combined, phase-compensated stream of subcarrier ``m``.

    Output has the same length and symbol alignment as the input; the
    stream is zero outside its support.
    """
    z = np.asarray(stream)
    taps = stream_taps(eq, m)
    h = (taps.size - 1) // 2
    out = np.apply_along_axis(lambda s: np.convolve(s, taps), -1, z)
    return out[..., h:h + z.shape[-1]]


def modified_analysis_filter(filt: PrototypeFilter, eq: FullRateEqualizer | None, m: int):
    """Receive filter ``f_m^*[-l] * phi_{k,m}[l]`` as ``(taps, zero_index)``.

    ``taps[zero_index + s]`` is the filter value at lag ``s``; the analysis
    output for symbol ``n`` is the filtered signal sampled at ``l = n M/2``.
    """
    rx = np.conj(filt.modulated(m))[::-1]
    zero = filt.length - 1
    if eq is None:
        return rx, zero
    return np.convolve(rx, eq.taps), zero - eq.lags[0]


def lowrate_residual(eq: LowRateEqualizer, pdp: PdpModel, M: int, filt: PrototypeFilter | None = None,
                     n_grid: int = 4001) -> dict:
    """Equalization residual ``|Phit(w) P(2w/M) - 1|`` on ``|w| <= pi``.

    Returns the unweighted maximum and the maximum weighted by the
    prototype power response normalised to a unit peak.
    """
    if filt is None:
        filt = design_phydyas(M, 4)
    omega = np.linspace(-np.pi, np.pi, n_grid)
    err = np.abs(eq.response(omega) * pdp.dtft(2 * omega / M) - 1)
    w = np.abs(filt.frequency_response(2 * omega / M)) ** 2
    w /= w.max()
    return {"max": float(err.max()), "weighted_max": float((w * err).max())}


def fullrate_residual(eq: FullRateEqualizer, pdp: PdpModel, M: int, filt: PrototypeFilter | None = None,
                      n_grid: int = 4001) -> dict:
    """Residual ``|Phi_{k,m}(nu) P_{k,m}(nu) - 1|`` over the passband of subcarrier ``m``."""
    if filt is None:
        filt = design_phydyas(M, 4)
    m = eq.subcarrier
    nu = np.linspace(-2 * np.pi / M, 2 * np.pi / M, n_grid)
    err = np.abs(eq.response(nu + 2 * np.pi * m / M) * pdp.dtft(nu) - 1)
    w = np.abs(filt.frequency_response(nu)) ** 2
    w /= w.max()
    return {"max": float(err.max()), "weighted_max": float((w * err).max())}


def equalizer_to_json(eq) -> str:
    """Serialise taps as ``[[re, im], ...]`` with identifying metadata."""
    rec = {
        "type": type(eq).__name__,
        "terminal": int(eq.terminal),
        "taps": [[float(t.real), float(t.imag)] for t in eq.taps],
    }
    if isinstance(eq, FullRateEqualizer):
        rec["subcarrier"] = int(eq.subcarrier)
        rec["num_subcarriers"] = int(eq.num_subcarriers)
    return json.dumps(rec)


def equalizer_from_json(text: str):
    rec = json.loads(text)
    taps = np.array([complex(re, im) for re, im in rec["taps"]])
    if rec["type"] == "FullRateEqualizer":
        return FullRateEqualizer(taps, rec["subcarrier"], rec["num_subcarriers"], rec["terminal"])
    if rec["type"] == "LowRateEqualizer":
        return LowRateEqualizer(taps, rec["terminal"])
    raise ParameterError(f"unknown equalizer type {rec['type']!r}")
