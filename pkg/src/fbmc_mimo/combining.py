"""Per-subcarrier linear combiners (MRC, ZF, MMSE)."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg as sla

from .exceptions import NumericalRankError, ParameterError

__all__ = ["CombinerKind", "Combiner", "build_combiner", "combine", "MAX_CONDITION"]

MAX_CONDITION = 1e12


class CombinerKind(str, Enum):
    MRC = "mrc"
    ZF = "zf"
    MMSE = "mmse"


@dataclass(frozen=True)
class Combiner:
    """Combining matrix ``W_m`` of shape ``(N, K)``; stream ``k`` is ``w_k^H y``."""

    weights: np.ndarray
    kind: CombinerKind
    subcarrier: int = 0

    @property
    def column_energy(self) -> np.ndarray:
        """``||w_{m,k}||^2`` per terminal."""
        return np.sum(np.abs(self.weights) ** 2, axis=0)


def build_combiner(H, kind, noise_var: float = 0.0, subcarrier: int = 0) -> Combiner:
    """Build ``W_m`` from the subcarrier channel matrix ``H_m`` (N x K).

    MRC is ``H D^{-1}`` with ``D = diag(||h_k||^2)``; ZF is
    ``H (H^H H)^{-1}`` computed from a QR factorisation; MMSE is
    ``H (H^H H + sigma^2 I)^{-1}`` through a Cholesky solve.

    Raises
    ------
    NumericalRankError
        For ZF when ``N < K`` or the Gram matrix condition number exceeds
        ``MAX_CONDITION``.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2:
        raise ParameterError("H must be an N x K matrix")
    kind = CombinerKind(kind)
    N, K = H.shape
    if kind is CombinerKind.MRC:
        d = np.sum(np.abs(H) ** 2, axis=0)
        if np.any(d == 0):
            raise NumericalRankError("zero channel column")
        W = H / d
    elif kind is CombinerKind.ZF:
        if N < K:
            raise NumericalRankError(f"ZF needs N >= K (N={N}, K={K})")
        Q, R = np.linalg.qr(H)
        if np.any(np.diag(R) == 0) or np.linalg.cond(R) ** 2 > MAX_CONDITION:
            raise NumericalRankError("channel Gram matrix is numerically singular")
        # W = Q R^{-H}
        W = sla.solve_triangular(R, Q.conj().T, lower=False).conj().T
    else:
        gram = H.conj().T @ H + noise_var * np.eye(K)
        c = sla.cho_factor(gram)
        W = sla.cho_solve(c, H.conj().T).conj().T
    return Combiner(W, kind, subcarrier)


def combine(W: Combiner, grids) -> np.ndarray:
    """Combine per-antenna demodulated samples at subcarrier ``W.subcarrier``.

    Parameters
    ----------
    grids : array_like, shape (N, M, N_sym) or (N, N_sym)
        Per-antenna analysis grids, or the subcarrier row of each.

    Returns
    -------
    ndarray, shape (K, N_sym)
        ``stream_k[n] = sum_i conj(W[i, k]) y_i[m, n]`` (real part not taken).
    """
    y = np.asarray(grids)
    if y.ndim == 3:
        y = y[:, W.subcarrier, :]
    if y.ndim != 2 or y.shape[0] != W.weights.shape[0]:
        raise ParameterError(f"expected {W.weights.shape[0]} antenna grids, got shape {y.shape}")
    return W.weights.conj().T @ y
