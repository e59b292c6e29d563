import numpy as np
import pytest

from liftwave.dwt2d import dwt2
from liftwave.lifting import LiftingParams, build_filters
from liftwave.unit import (
    WaveletUnitParams,
    periodic_conv2d,
    replace_downsample,
    replace_pool,
    replace_stride_conv,
    unit_backward,
    unit_forward,
)
from oracles import central_difference, rel_error

FD_STEP = 1e-5


def random_params(rng, channels, steps):
    return WaveletUnitParams(
        LiftingParams(tuple(rng.uniform(-0.4, 0.4, size=steps))),
        rng.normal(size=(channels, 4)),
        rng.normal(size=channels),
    )


def composition_oracle(x, p):
    fp = build_filters(p.lifting)
    out = []
    for c, img in enumerate(x):
        s = dwt2(img, fp)
        w = p.weights[c]
        out.append(sum(wb * np.maximum(band, 0) for wb, band in zip(w, s.as_array())) + p.bias[c])
    return np.array(out)


def test_constant_image_low_pass_start():
    p = WaveletUnitParams.initial(LiftingParams(()), channels=1)
    y, _ = unit_forward(np.full((1, 8, 8), 0.25), p)
    np.testing.assert_allclose(y, 0.5, atol=1e-15)


def test_zero_weights_give_bias():
    p = WaveletUnitParams(LiftingParams((0.3,)), np.zeros((2, 4)), [1.5, -2.0])
    y, _ = unit_forward(np.random.default_rng(0).normal(size=(2, 8, 8)), p)
    np.testing.assert_array_equal(y[0], 1.5)
    np.testing.assert_array_equal(y[1], -2.0)


@pytest.mark.parametrize("steps", [0, 1, 2])
def test_forward_matches_composition(steps):
    rng = np.random.default_rng(steps)
    p = random_params(rng, 3, steps)
    x = rng.normal(size=(3, 16, 16))
    y, _ = unit_forward(x, p)
    np.testing.assert_allclose(y, composition_oracle(x, p), atol=1e-12)


def test_batched_forward_matches_single():
    rng = np.random.default_rng(1)
    p = random_params(rng, 2, 1)
    xb = rng.normal(size=(5, 2, 8, 8))
    yb, _ = unit_forward(xb, p)
    for i in range(5):
        np.testing.assert_array_equal(yb[i], unit_forward(xb[i], p)[0])


def test_haar_ll_is_scaled_average_pool():
    rng = np.random.default_rng(2)
    x = rng.uniform(0, 1, size=(2, 16, 16))
    p = WaveletUnitParams.initial(LiftingParams(()), channels=2)
    y, _ = unit_forward(x, p)
    mean = x.reshape(2, 8, 2, 8, 2).mean(axis=(2, 4))
    np.testing.assert_allclose(y, 2 * mean, atol=1e-12)


def test_zero_upstream_gradient():
    rng = np.random.default_rng(3)
    p = random_params(rng, 2, 2)
    x = rng.normal(size=(2, 8, 8))
    y, cache = unit_forward(x, p)
    g = unit_backward(np.zeros_like(y), cache, p)
    for block in (g.d_weights, g.d_bias, g.d_lifting, g.d_input):
        assert not np.any(block)


def test_weight_gradient_is_masked_sum():
    rng = np.random.default_rng(4)
    p = random_params(rng, 1, 1)
    x = rng.normal(size=(1, 16, 16))
    y, cache = unit_forward(x, p)
    dy = rng.normal(size=y.shape)
    g = unit_backward(dy, cache, p)
    s = dwt2(x[0], build_filters(p.lifting))
    assert g.d_weights[0, 0] == pytest.approx(np.sum(dy[0] * np.maximum(s.ll, 0)), abs=1e-12)
    assert g.d_weights[0, 3] == pytest.approx(np.sum(dy[0] * np.maximum(s.hh, 0)), abs=1e-12)
    assert g.d_bias[0] == pytest.approx(dy.sum())


def gradient_errors(seed, steps, channels=2, size=8, batch=None):
    rng = np.random.default_rng(seed)
    p = random_params(rng, channels, steps)
    shape = (channels, size, size) if batch is None else (batch, channels, size, size)
    x = rng.normal(size=shape)
    y, cache = unit_forward(x, p)
    dy = rng.normal(size=y.shape)
    g = unit_backward(dy, cache, p)

    def loss(x=x, a=p.lifting.as_array(), w=p.weights, b=p.bias):
        q = WaveletUnitParams(LiftingParams(tuple(a)), w, b)
        return float(np.sum(dy * unit_forward(x, q)[0]))

    return {
        "input": rel_error(g.d_input, central_difference(lambda v: loss(x=v), x, FD_STEP)),
        "lifting": rel_error(g.d_lifting,
                             central_difference(lambda v: loss(a=v), p.lifting.as_array(), FD_STEP)),
        "weights": rel_error(g.d_weights, central_difference(lambda v: loss(w=v), p.weights, FD_STEP)),
        "bias": rel_error(g.d_bias, central_difference(lambda v: loss(b=v), p.bias, FD_STEP)),
    }


@pytest.mark.parametrize("steps", [1, 2])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_gradients_match_finite_differences(seed, steps):
    errors = gradient_errors(seed, steps)
    assert max(errors.values()) < 1e-5, errors


def test_gradients_batched_and_larger():
    errors = gradient_errors(5, 2, channels=1, size=16, batch=3)
    assert max(errors.values()) < 1e-5, errors
    errors = gradient_errors(6, 3, channels=2, size=16)
    assert max(errors.values()) < 1e-5, errors


def test_lifting_gradient_nonzero_when_filter_fits():
    rng = np.random.default_rng(7)
    p = random_params(rng, 1, 2)
    x = rng.normal(size=(1, 16, 16))
    y, cache = unit_forward(x, p)
    g = unit_backward(rng.normal(size=y.shape), cache, p)
    assert np.all(np.abs(g.d_lifting) > 1e-6)


def test_relu_gradient_zero_at_zero():
    # every subband of a zero image is exactly 0; a unit subgradient there
    # would leak into d_input and d_lifting
    p = WaveletUnitParams(LiftingParams((0.2,)), np.ones((1, 4)), [0.0])
    y, cache = unit_forward(np.zeros((1, 8, 8)), p)
    assert np.all(cache.subbands == 0)
    g = unit_backward(np.ones_like(y), cache, p)
    np.testing.assert_array_equal(g.d_input, 0)
    np.testing.assert_array_equal(g.d_lifting, 0)
    np.testing.assert_array_equal(g.d_weights, 0)


@pytest.mark.parametrize("fn", ["pool", "down", "conv"])
def test_replacement_patterns_halve_resolution(fn):
    rng = np.random.default_rng(8)
    p = random_params(rng, 3, 1)
    x = rng.normal(size=(2, 3, 12, 20))
    if fn == "pool":
        y = replace_pool(x, p)
    elif fn == "down":
        y = replace_downsample(x, p)
    else:
        y = replace_stride_conv(x, rng.normal(size=(3, 3, 3, 3)), p)
    assert y.shape == (2, 3, 6, 10)


def test_replacements_reduce_to_unit():
    rng = np.random.default_rng(9)
    p = random_params(rng, 2, 2)
    x = rng.normal(size=(2, 16, 16))
    y = unit_forward(x, p)[0]
    np.testing.assert_array_equal(replace_downsample(x, p), y)
    np.testing.assert_array_equal(replace_pool(x, p), y)
    identity = np.eye(2)[:, :, None, None]
    np.testing.assert_allclose(replace_stride_conv(x, identity, p), y, atol=1e-15)


def test_periodic_conv_against_loops():
    rng = np.random.default_rng(10)
    x = rng.normal(size=(2, 6, 8))
    k = rng.normal(size=(3, 2, 3, 3))
    out = periodic_conv2d(x, k)
    ref = np.zeros((3, 6, 8))
    for o in range(3):
        for r in range(6):
            for c in range(8):
                for i in range(2):
                    for u in range(3):
                        for v in range(3):
                            ref[o, r, c] += k[o, i, u, v] * x[i, (r + u - 1) % 6, (c + v - 1) % 8]
    np.testing.assert_allclose(out, ref, atol=1e-12)


def test_errors():
    p = WaveletUnitParams.initial(LiftingParams(()), channels=2)
    with pytest.raises(ValueError, match="channels"):
        unit_forward(np.zeros((3, 8, 8)), p)
    with pytest.raises(ValueError, match="even"):
        unit_forward(np.zeros((2, 8, 7)), p)
    with pytest.raises(ValueError):
        WaveletUnitParams(LiftingParams(()), np.zeros(5), [0.0])
    with pytest.raises(ValueError):
        WaveletUnitParams(LiftingParams(()), np.zeros((1, 4)), [np.nan])
    with pytest.raises(ValueError, match="kernel"):
        replace_stride_conv(np.zeros((2, 8, 8)), np.zeros((2, 2, 2, 2)), p)
    y, cache = unit_forward(np.zeros((2, 8, 8)), p)
    with pytest.raises(ValueError, match="dy"):
        unit_backward(np.zeros((2, 3, 3)), cache, p)


def test_bias_can_be_disabled():
    p = WaveletUnitParams(LiftingParams(()), np.zeros((1, 4)), [3.0], use_bias=False)
    y, cache = unit_forward(np.ones((1, 4, 4)), p)
    np.testing.assert_array_equal(y, 0)
    assert unit_backward(np.ones_like(y), cache, p).d_bias[0] == 0
