import math

import numpy as np
import pytest

from liftwave.lifting import build_filters, haar_base, reference_h1
from liftwave.spectral import dc_gain, freqz, nyquist_gain
from oracles import dft_magnitude


def test_haar_dc_gain():
    fr = freqz(haar_base().h0, 16)
    assert fr.magnitude[0] == pytest.approx(math.sqrt(2), abs=1e-15)
    assert fr.omega[0] == 0 and fr.omega[-1] == pytest.approx(math.pi)


@pytest.mark.parametrize("a", [[0.5], [405 / 2357, -166 / 7071], [-1.2, 0.4, 0.9]])
def test_lifted_high_pass_endpoints(a):
    fr = freqz(build_filters(a).h1, 33)
    assert fr.magnitude[0] < 1e-12
    assert fr.magnitude[-1] == pytest.approx(math.sqrt(2), abs=1e-12)


def test_bior15_matches_dft_oracle():
    taps = reference_h1("bior1.5")
    fr = freqz(taps, 512)
    np.testing.assert_allclose(fr.magnitude, dft_magnitude(taps, fr.omega), atol=1e-12)
    # zero-padded FFT on a grid containing the same frequencies
    padded = np.fft.rfft(taps, 2 * 511)
    np.testing.assert_allclose(fr.magnitude, np.abs(padded), atol=1e-12)


def test_grid_and_phase():
    fr = freqz(build_filters([0.3]).h1, 5)
    assert fr.omega.size == 5
    assert np.all(np.diff(fr.omega) > 0)
    assert np.all(fr.magnitude >= 0)
    # pure delay: phase is linear, unwrapping removes the jumps
    delay = np.zeros(7)
    delay[6] = 1
    fr = freqz(delay, 64)
    np.testing.assert_allclose(fr.phase, -6 * fr.omega, atol=1e-12)


def test_gains():
    h1 = build_filters([0.2, 0.1]).h1
    assert abs(dc_gain(h1)) < 1e-12
    assert nyquist_gain(h1) == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("taps, K", [([], 8), ([1.0], 1), ([1.0], 2.5)])
def test_errors(taps, K):
    with pytest.raises(ValueError):
        freqz(taps, K)
