"""Frequency response of FIR tap vectors on ``[0, pi]``."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FrequencyResponse:
    omega: np.ndarray
    magnitude: np.ndarray
    phase: np.ndarray
    filter_id: dict = field(default_factory=dict)

    def rows(self):
        return zip(self.omega, self.magnitude, self.phase)


def freqz(taps, K: int = 512, filter_id: dict | None = None) -> FrequencyResponse:
    """Evaluate ``H(e^{jw}) = sum_n taps[n] e^{-jwn}`` at ``K`` points.

    The grid includes both endpoints.  Phase is unwrapped.
    """
    taps = np.asarray(taps, dtype=float).ravel()
    if taps.size == 0:
        raise ValueError("taps must be nonempty")
    if int(K) != K or K < 2:
        raise ValueError(f"K must be an integer >= 2, got {K}")
    omega = np.linspace(0.0, np.pi, int(K))
    response = np.polynomial.polynomial.polyval(np.exp(-1j * omega), taps)
    return FrequencyResponse(
        omega=omega,
        magnitude=np.abs(response),
        phase=np.unwrap(np.angle(response)),
        filter_id=dict(filter_id or {}),
    )


def dc_gain(taps) -> float:
    return float(np.sum(taps))


def nyquist_gain(taps) -> float:
    taps = np.asarray(taps, dtype=float)
    return float(abs(np.sum(taps * (-1.0) ** np.arange(taps.size))))
