"""Single-level separable 2D transform.

The left operator acts along rows (the vertical axis), so ``lh = H X L^T``
is high-pass vertically and responds to horizontal edges; ``hl`` responds
to vertical edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .filterbank import AnalysisMatrices, FilterBankError, build_matrices, synthesize
from .lifting import FilterPair, build_filters


@dataclass(frozen=True)
class Subbands:
    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray
    steps: int = 0
    params: tuple[float, ...] = ()
    alignment: int = 0

    def as_array(self) -> np.ndarray:
        """Stack as ``(4, rows/2, cols/2)`` in ll, lh, hl, hh order."""
        return np.stack([self.ll, self.lh, self.hl, self.hh])

    @property
    def shape(self) -> tuple[int, int]:
        return self.ll.shape


def _matrices(fp: FilterPair, rows: int, cols: int):
    if rows % 2 or cols % 2:
        raise FilterBankError("dimensions must be even")
    return build_matrices(fp, rows), build_matrices(fp, cols)


def dwt2(x, fp: FilterPair) -> Subbands:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise FilterBankError(f"expected a 2D image, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise FilterBankError("image contains non-finite values")
    rm, cm = _matrices(fp, *x.shape)
    xl = x @ cm.L.T
    xh = x @ cm.H.T
    params = fp.params.a if fp.params is not None else ()
    return Subbands(
        ll=rm.L @ xl, lh=rm.H @ xl, hl=rm.L @ xh, hh=rm.H @ xh,
        steps=len(params), params=params, alignment=fp.base_delay,
    )


def idwt2(s: Subbands, fp: FilterPair) -> np.ndarray:
    shapes = {b.shape for b in (s.ll, s.lh, s.hl, s.hh)}
    if len(shapes) != 1:
        raise FilterBankError(f"subband shapes differ: {sorted(shapes)}")
    if fp.params is not None and (s.steps, tuple(s.params)) != (fp.steps, fp.params.a):
        raise FilterBankError("subbands were produced with different lifting parameters")
    r2, c2 = s.ll.shape
    rm, cm = _matrices(fp, 2 * r2, 2 * c2)
    # undo the row operator (axis 0) first, then the column operator
    xl = synthesize(s.ll, s.lh, rm, axis=0)
    xh = synthesize(s.hl, s.hh, rm, axis=0)
    return synthesize(xl, xh, cm, axis=1)


@lru_cache(maxsize=64)
def _cached_pair(a: tuple[float, ...]) -> FilterPair:
    return build_filters(a)


def dwt2_params(x, a=()) -> Subbands:
    """Convenience wrapper building the filter pair from coefficients."""
    return dwt2(x, _cached_pair(tuple(float(v) for v in a)))


def idwt2_params(s: Subbands) -> np.ndarray:
    return idwt2(s, _cached_pair(tuple(s.params)))


__all__ = ["Subbands", "dwt2", "idwt2", "dwt2_params", "idwt2_params", "AnalysisMatrices"]
