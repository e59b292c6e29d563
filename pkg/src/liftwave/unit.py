"""Trainable wavelet pooling unit.

Each channel is decomposed into four subbands, each subband goes through a
ReLU, and a per-channel affine combiner (a 1x1 convolution over the subband
axis) merges them into a half-resolution map.  The lifting coefficients are
shared by all channels.

Arrays are laid out as ``(..., channels, rows, cols)``; any leading axes are
treated as a batch.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .filterbank import FilterBankError, build_matrices
from .lifting import LiftingParams, build_filters, filter_jacobian

BANDS = ("ll", "lh", "hl", "hh")


@dataclass(frozen=True)
class WaveletUnitParams:
    lifting: LiftingParams
    weights: np.ndarray  # (channels, 4), columns in BANDS order
    bias: np.ndarray  # (channels,)
    use_bias: bool = True

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        b = np.array(self.bias, dtype=float).ravel()
        if w.ndim == 1:
            if w.size % 4:
                raise ValueError("weights length must be a multiple of 4")
            w = w.reshape(-1, 4)
        if w.ndim != 2 or w.shape[1] != 4:
            raise ValueError(f"weights must have shape (channels, 4), got {w.shape}")
        if b.shape != (w.shape[0],):
            raise ValueError(f"bias must have {w.shape[0]} entries, got {b.size}")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise ValueError("unit parameters must be finite")
        if not isinstance(self.lifting, LiftingParams):
            object.__setattr__(self, "lifting", LiftingParams(tuple(self.lifting)))
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)

    @property
    def channels(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def initial(cls, lifting, channels: int = 1, use_bias: bool = True):
        """Low-pass start: ``w_ll = 1``, other weights and bias zero."""
        w = np.zeros((channels, 4))
        w[:, 0] = 1.0
        return cls(lifting, w, np.zeros(channels), use_bias)

    def with_updates(self, **kw) -> "WaveletUnitParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class UnitGradients:
    d_weights: np.ndarray
    d_bias: np.ndarray
    d_lifting: np.ndarray
    d_input: np.ndarray


@dataclass
class UnitCache:
    x: np.ndarray
    subbands: np.ndarray  # (..., channels, 4, r/2, c/2)
    mask: np.ndarray  # subbands > 0
    rows: object
    cols: object


def _check_input(x: np.ndarray, p: WaveletUnitParams):
    if x.ndim < 3:
        raise ValueError(f"expected (..., channels, rows, cols), got shape {x.shape}")
    if x.shape[-3] != p.channels:
        raise ValueError(f"input has {x.shape[-3]} channels, parameters have {p.channels}")
    if x.shape[-1] % 2 or x.shape[-2] % 2:
        raise FilterBankError("dimensions must be even")


def decompose(x: np.ndarray, lifting: LiftingParams):
    """Subbands stacked on a new axis before the spatial ones."""
    fp = build_filters(lifting)
    # feature maps may be smaller than the lifted filter; taps wrap around
    rm = build_matrices(fp, x.shape[-2], wrap=True)
    cm = build_matrices(fp, x.shape[-1], wrap=True)
    xl = x @ cm.L.T
    xh = x @ cm.H.T
    s = np.stack([rm.L @ xl, rm.H @ xl, rm.L @ xh, rm.H @ xh], axis=-3)
    return s, rm, cm


def unit_forward(x, p: WaveletUnitParams):
    x = np.asarray(x, dtype=float)
    _check_input(x, p)
    s, rm, cm = decompose(x, p.lifting)
    mask = s > 0
    relu = np.where(mask, s, 0.0)
    y = np.einsum("...cbij,cb->...cij", relu, p.weights)
    if p.use_bias:
        y = y + p.bias[:, None, None]
    return y, UnitCache(x=x, subbands=s, mask=mask, rows=rm, cols=cm)


def _fold_taps(d_matrix: np.ndarray, n_taps: int, shift: int) -> np.ndarray:
    """Gradient of a ``circulant_rows`` matrix folded back onto its taps."""
    rows, M = d_matrix.shape
    i = np.arange(rows)[:, None]
    n = np.arange(n_taps)[None, :]
    return d_matrix[i, (2 * i + n - shift) % M].sum(axis=0)


def unit_backward(dy, cache: UnitCache, p: WaveletUnitParams) -> UnitGradients:
    dy = np.asarray(dy, dtype=float)
    expected = cache.subbands.shape[:-3] + cache.subbands.shape[-2:]
    if dy.shape != expected:
        raise ValueError(f"dy has shape {dy.shape}, expected {expected}")
    s, mask, x = cache.subbands, cache.mask, cache.x
    rm, cm = cache.rows, cache.cols
    batch_axes = tuple(range(dy.ndim - 3))

    relu = np.where(mask, s, 0.0)
    d_weights = np.einsum("ncij,ncbij->cb", dy.reshape((-1,) + dy.shape[-3:]),
                          relu.reshape((-1,) + relu.shape[-4:]))
    d_bias = dy.sum(axis=batch_axes + (-2, -1)) if p.use_bias else np.zeros(p.channels)

    # ReLU passes gradient only where the subband is strictly positive
    g = np.where(mask, dy[..., None, :, :] * p.weights[:, :, None, None], 0.0)
    g_ll, g_lh, g_hl, g_hh = (g[..., b, :, :] for b in range(4))

    Lr, Hr, Lc, Hc = rm.L, rm.H, cm.L, cm.H
    d_input = (Lr.T @ (g_ll @ Lc + g_hl @ Hc)
               + Hr.T @ (g_lh @ Lc + g_hh @ Hc))

    def total(a):
        return a.reshape((-1,) + a.shape[-2:]).sum(axis=0)

    sw = lambda a: np.swapaxes(a, -1, -2)  # noqa: E731
    d_Hr = total(g_lh @ sw(x @ Lc.T) + g_hh @ sw(x @ Hc.T))
    d_Hc = total(sw(g_hl) @ (Lr @ x) + sw(g_hh) @ (Hr @ x))
    fp = rm.filters
    d_h1 = (_fold_taps(d_Hr, fp.h1.size, rm.alignment)
            + _fold_taps(d_Hc, fp.h1.size, cm.alignment))
    d_lifting = filter_jacobian(p.lifting).T @ d_h1

    return UnitGradients(d_weights=d_weights, d_bias=d_bias,
                         d_lifting=d_lifting, d_input=d_input)


def periodic_conv2d(x, kernel) -> np.ndarray:
    """Same-size cross-correlation with wrap-around borders.

    ``kernel`` has shape ``(out_channels, in_channels, kh, kw)`` with odd
    ``kh`` and ``kw``; the kernel centre is aligned with the output pixel.
    """
    x = np.asarray(x, dtype=float)
    k = np.asarray(kernel, dtype=float)
    if k.ndim != 4 or k.shape[1] != x.shape[-3] or k.shape[2] % 2 == 0 or k.shape[3] % 2 == 0:
        raise ValueError(
            f"kernel shape {k.shape} does not fit input with {x.shape[-3]} channels")
    ch, cw = k.shape[2] // 2, k.shape[3] // 2
    out = np.zeros(x.shape[:-3] + (k.shape[0],) + x.shape[-2:])
    for u in range(k.shape[2]):
        for v in range(k.shape[3]):
            shifted = np.roll(x, (ch - u, cw - v), axis=(-2, -1))
            out += np.einsum("oi,...ihw->...ohw", k[:, :, u, v], shifted)
    return out


def replace_pool(x, p: WaveletUnitParams) -> np.ndarray:
    """Unit in place of a max-pool layer."""
    return unit_forward(x, p)[0]


def replace_downsample(x, p: WaveletUnitParams) -> np.ndarray:
    """Unit in place of a strided shortcut downsampler."""
    return unit_forward(x, p)[0]


def replace_stride_conv(x, conv_weights, p: WaveletUnitParams) -> np.ndarray:
    """Stride-1 convolution followed by the unit, replacing a stride-2 conv."""
    return unit_forward(periodic_conv2d(x, conv_weights), p)[0]
