"""Tunable biorthogonal filter pairs built by lifting a Haar filter bank.

Every lifting step adds ``P_k(z^2) H0(z)`` to the high-pass branch after
delaying it by ``z^-2``, with ``P_k(z) = -a_k + a_k z^(-2k)``.  The low-pass
filter is never touched, so ``h0`` stays at two taps while ``h1`` grows by
four taps per step.

Tap vectors are stored in causal order: ``taps[n]`` is the coefficient of
``z^-n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Sequence

import numpy as np

SQRT_HALF = 1.0 / math.sqrt(2.0)

# Default a_3 used when a two-step solution is extended to three steps.
NEAR_ZERO_A3 = 1e-3

# High-pass taps as printed with four decimals.  The dominant pair 0.7071
# stands for 1/sqrt(2); ``reference_h1`` rescales accordingly.
_PRINTED_H1 = {
    "bior1.3": [-0.0880, -0.0880, 0.7071, -0.7071, 0.0880, 0.0880],
    "bior1.5": [0.0166, 0.0166, -0.1215, -0.1215, 0.7071, -0.7071,
                0.1215, 0.1215, -0.0166, -0.0166],
}
_PRINTED_STEPS = {"bior1.3": 1, "bior1.5": 2}


class LiftingError(ValueError):
    """Invalid lifting parameters or an unsolvable fitting problem."""


@dataclass(frozen=True)
class LiftingParams:
    """Ordered lifting coefficients ``a_1 .. a_N``."""

    a: tuple[float, ...] = ()

    def __post_init__(self):
        a = tuple(float(v) for v in np.asarray(self.a, dtype=float).ravel())
        if not all(math.isfinite(v) for v in a):
            raise LiftingError(f"lifting parameters must be finite, got {a}")
        object.__setattr__(self, "a", a)

    @property
    def steps(self) -> int:
        return len(self.a)

    def as_array(self) -> np.ndarray:
        return np.array(self.a, dtype=float)


@dataclass(frozen=True)
class FilterPair:
    """Analysis low-pass/high-pass taps.

    ``base_delay`` is the ``z^-2N`` delay the high-pass branch accumulated
    relative to the low-pass branch.  ``params`` records the lifting
    coefficients the pair was built from (``None`` for a pair supplied
    directly), which lets synthesis run the exact inverse ladder.
    """

    h0: np.ndarray
    h1: np.ndarray
    base_delay: int = 0
    params: LiftingParams | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("h0", "h1"):
            taps = np.array(getattr(self, name), dtype=float)
            if taps.ndim != 1 or taps.size == 0:
                raise LiftingError(f"{name} must be a nonempty 1D tap vector")
            taps.setflags(write=False)
            object.__setattr__(self, name, taps)

    @property
    def steps(self) -> int:
        return 0 if self.params is None else self.params.steps


def _as_params(params) -> LiftingParams:
    if isinstance(params, LiftingParams):
        return params
    return LiftingParams(tuple(np.atleast_1d(np.asarray(params, dtype=float))))


def _shift(taps: np.ndarray, delay: int, length: int) -> np.ndarray:
    """Multiply by ``z^-delay`` and zero-pad to ``length`` taps."""
    out = np.zeros(length)
    out[delay:delay + taps.size] = taps
    return out


def haar_base() -> FilterPair:
    """Haar (Bior1.1) analysis pair, the starting point of every ladder."""
    return FilterPair(
        h0=np.array([SQRT_HALF, SQRT_HALF]),
        h1=np.array([SQRT_HALF, -SQRT_HALF]),
        base_delay=0,
        params=LiftingParams(()),
    )


def build_filters(params) -> FilterPair:
    """Run the lifting recursion for ``len(params.a)`` steps.

    Step ``k`` leaves ``h0`` alone and replaces the high-pass with
    ``(-a_k + a_k z^(-4k)) H0(z) + z^-2 H1(z)``.
    """
    params = _as_params(params)
    base = haar_base()
    h0, h1 = base.h0, np.array(base.h1)
    for k, a_k in enumerate(params.a, start=1):
        length = max(h1.size + 2, 4 * k + h0.size)
        h1 = (_shift(-a_k * h0, 0, length)
              + _shift(a_k * h0, 4 * k, length)
              + _shift(h1, 2, length))
    return FilterPair(h0=h0, h1=h1, base_delay=2 * params.steps, params=params)


def _lifting_columns(steps: int) -> np.ndarray:
    base = haar_base()
    length = base.h0.size + 4 * steps
    cols = np.zeros((length, steps))
    for k in range(1, steps + 1):
        # (z^-4k - 1) z^-2(N-k) H0
        delay = 2 * (steps - k)
        cols[:, k - 1] = (_shift(base.h0, delay + 4 * k, length)
                          - _shift(base.h0, delay, length))
    return cols


def closed_form_filters(params) -> FilterPair:
    """Affine form of the ladder: ``h1 = z^-2N H1 + sum_k a_k c_k``.

    Must agree with :func:`build_filters` tap for tap.
    """
    params = _as_params(params)
    base = haar_base()
    n = params.steps
    length = base.h1.size + 4 * n
    h1 = _shift(base.h1, 2 * n, length) + _lifting_columns(n) @ params.as_array()
    return FilterPair(h0=base.h0, h1=h1, base_delay=2 * n, params=params)


def filter_jacobian(params) -> np.ndarray:
    """Jacobian ``d h1 / d a`` of shape ``(2 + 4N, N)``.

    ``h1`` is affine in ``a`` so the result does not depend on the values,
    only on the step count; ``params`` is still validated.
    """
    params = _as_params(params)
    return _lifting_columns(params.steps)


@dataclass(frozen=True)
class SolveResult:
    params: LiftingParams
    residual: float
    rank: int


def solve_params(target_h1: Sequence[float], steps: int) -> SolveResult:
    """Least-squares lifting coefficients reproducing ``target_h1``.

    Parameters
    ----------
    target_h1 : sequence of float
        Desired high-pass taps, length ``2 + 4 * steps``.
    steps : int
        Number of lifting steps.

    Returns
    -------
    SolveResult
        Fitted parameters, the 2-norm of the tap residual, and the rank of
        the design matrix.
    """
    target = np.asarray(target_h1, dtype=float).ravel()
    if steps < 0:
        raise LiftingError("steps must be nonnegative")
    expected = 2 + 4 * steps
    if target.size != expected:
        raise LiftingError(
            f"target has {target.size} taps, {steps} steps need {expected}")
    if not np.all(np.isfinite(target)):
        raise LiftingError("target taps must be finite")

    design = _lifting_columns(steps)
    offset = _shift(haar_base().h1, 2 * steps, expected)
    if steps == 0:
        return SolveResult(LiftingParams(()),
                           float(np.linalg.norm(target - offset)), 0)
    # lstsq goes through an SVD, no normal equations
    a, _, rank, _ = np.linalg.lstsq(design, target - offset, rcond=None)
    if rank < steps:
        raise LiftingError(f"design matrix is rank deficient ({rank} < {steps})")
    residual = float(np.linalg.norm(design @ a + offset - target))
    return SolveResult(LiftingParams(tuple(a)), residual, int(rank))


def printed_h1(name: str) -> np.ndarray:
    """Four-decimal high-pass taps of ``bior1.3`` or ``bior1.5``."""
    try:
        return np.array(_PRINTED_H1[name])
    except KeyError:
        raise LiftingError(f"unknown reference filter {name!r}") from None


def reference_h1(name: str) -> np.ndarray:
    """Printed taps rescaled so the 0.7071 pair is exactly ``1/sqrt(2)``.

    The printed values are multiples of the rounded Haar tap, so this is the
    target a lifting ladder can match with zero residual.
    """
    return printed_h1(name) * (SQRT_HALF / 0.7071)


def init_params(mode: str, a3: float = NEAR_ZERO_A3, steps: int | None = None) -> LiftingParams:
    """Starting coefficients for a named initialization.

    ``haar`` gives ``steps`` zeros (default 1), ``bior1.3``/``bior1.5`` are
    fitted to the reference taps, ``near-zero-a3`` appends ``a3`` to the
    ``bior1.5`` solution.
    """
    if mode == "haar":
        return LiftingParams((0.0,) * (1 if steps is None else steps))
    if mode in _PRINTED_H1:
        return solve_params(reference_h1(mode), _PRINTED_STEPS[mode]).params
    if mode == "near-zero-a3":
        two = init_params("bior1.5")
        return LiftingParams(two.a + (float(a3),))
    raise LiftingError(f"unknown init mode {mode!r}")


INIT_MODES = ("haar", "bior1.3", "bior1.5", "near-zero-a3")
