"""One-dimensional analysis/synthesis in matrix form with periodic borders."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lifting import FilterPair, SQRT_HALF


class FilterBankError(ValueError):
    pass


@dataclass(frozen=True)
class AnalysisMatrices:
    """Downsampled circulant operators for one filter pair.

    Row ``i`` of ``L`` holds ``h0`` starting at column ``2i``; row ``i`` of
    ``H`` holds ``h1`` starting at column ``2i - alignment`` (mod ``M``), so
    the dominant Haar-like taps of a lifted ``h1`` sit over the same pair of
    samples as ``h0``.
    """

    L: np.ndarray
    H: np.ndarray
    M: int
    alignment: int
    filters: FilterPair

    def stacked(self) -> np.ndarray:
        return np.vstack([self.L, self.H])

    def condition_number(self) -> float:
        return float(np.linalg.cond(self.stacked()))


def circulant_rows(taps: np.ndarray, M: int, shift: int = 0) -> np.ndarray:
    """``(M/2, M)`` matrix with ``taps`` placed at ``2i - shift`` in row ``i``."""
    out = np.zeros((M // 2, M))
    cols = (np.arange(taps.size) - shift) % M
    for i in range(M // 2):
        np.add.at(out[i], (cols + 2 * i) % M, taps)
    return out


def build_matrices(fp: FilterPair, M: int, wrap: bool = False) -> AnalysisMatrices:
    """Build ``L`` and ``H`` for signals of length ``M``.

    With ``wrap=True`` filters longer than the signal are folded onto the
    circle (taps that land on the same column add up); otherwise such a
    length is rejected.
    """
    if M % 2 or M < 2:
        raise FilterBankError(f"signal length must be even, got {M}")
    if not wrap and (M < fp.h1.size or M < fp.h0.size):
        raise FilterBankError(
            f"signal length {M} is shorter than the filter ({fp.h1.size} taps)")
    alignment = fp.base_delay
    L = circulant_rows(fp.h0, M)
    H = circulant_rows(fp.h1, M, alignment)
    for m in (L, H):
        m.setflags(write=False)
    return AnalysisMatrices(L=L, H=H, M=M, alignment=alignment, filters=fp)


def _check_length(x: np.ndarray, M: int, axis: int):
    if x.shape[axis] != M:
        raise FilterBankError(f"expected length {M} along axis {axis}, got {x.shape[axis]}")


def analyze(x: np.ndarray, am: AnalysisMatrices, axis: int = -1):
    """Apply ``L`` and ``H`` along ``axis``; returns ``(low, high)``."""
    x = np.asarray(x, dtype=float)
    _check_length(x, am.M, axis)
    xm = np.moveaxis(x, axis, -1)
    low = xm @ am.L.T
    high = xm @ am.H.T
    return np.moveaxis(low, -1, axis), np.moveaxis(high, -1, axis)


def analyze_1d(x, am: AnalysisMatrices):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise FilterBankError("analyze_1d expects a vector")
    return analyze(x, am)


def _inverse_by_lifting(low, high, am: AnalysisMatrices):
    # polyphase view of step k: high[i] += a_k * (low[i+k] - low[i-k])
    params = am.filters.params
    detail = np.array(high, dtype=float)
    for k in range(params.steps, 0, -1):
        a_k = params.a[k - 1]
        detail -= a_k * (np.roll(low, -k, axis=-1) - np.roll(low, k, axis=-1))
    out = np.empty(low.shape[:-1] + (am.M,))
    out[..., 0::2] = SQRT_HALF * (low + detail)
    out[..., 1::2] = SQRT_HALF * (low - detail)
    return out


def _is_lifted_haar(fp: FilterPair) -> bool:
    return (fp.params is not None
            and np.array_equal(fp.h0, [SQRT_HALF, SQRT_HALF])
            and fp.base_delay == 2 * fp.params.steps)


def synthesize(low, high, am: AnalysisMatrices, axis: int = -1) -> np.ndarray:
    """Invert :func:`analyze` along ``axis``.

    Lifted Haar pairs are undone step by step; any other pair falls back to
    solving the stacked ``[L; H]`` system.
    """
    low = np.asarray(low, dtype=float)
    high = np.asarray(high, dtype=float)
    if low.shape != high.shape:
        raise FilterBankError(f"subband shapes differ: {low.shape} vs {high.shape}")
    _check_length(low, am.M // 2, axis)
    lm = np.moveaxis(low, axis, -1)
    hm = np.moveaxis(high, axis, -1)
    if _is_lifted_haar(am.filters):
        out = _inverse_by_lifting(lm, hm, am)
    else:
        coeffs = np.concatenate([lm, hm], axis=-1)
        flat = coeffs.reshape(-1, am.M)
        out = np.linalg.solve(am.stacked(), flat.T).T.reshape(coeffs.shape)
    return np.moveaxis(out, -1, axis)


def synthesize_1d(low, high, am: AnalysisMatrices) -> np.ndarray:
    return synthesize(np.asarray(low, dtype=float).ravel(),
                      np.asarray(high, dtype=float).ravel(), am)
