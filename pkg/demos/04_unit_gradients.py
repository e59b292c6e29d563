"""Forward and backward passes of the wavelet unit, checked numerically.

Run with ``python3 demos/04_unit_gradients.py``.
"""
import numpy as np

from liftwave.lifting import LiftingParams
from liftwave.unit import WaveletUnitParams, unit_backward, unit_forward

rng = np.random.default_rng(3)
p = WaveletUnitParams(LiftingParams((0.17, -0.02)), rng.normal(size=(2, 4)), rng.normal(size=2))
x = rng.normal(size=(2, 16, 16))

y, cache = unit_forward(x, p)
print("input", x.shape, "-> output", y.shape)

# Pretend the loss is <dy, y> for a fixed random dy.
dy = rng.normal(size=y.shape)
g = unit_backward(dy, cache, p)


def loss(a):
    q = WaveletUnitParams(LiftingParams(tuple(a)), p.weights, p.bias)
    return float(np.sum(dy * unit_forward(x, q)[0]))


# Compare d(loss)/d(a_k) against central differences.
h = 1e-5
a = p.lifting.as_array()
for k in range(a.size):
    e = np.zeros_like(a)
    e[k] = h
    fd = (loss(a + e) - loss(a - e)) / (2 * h)
    print(f"a_{k + 1}: analytic {g.d_lifting[k]: .8f}  finite difference {fd: .8f}")

print("d_weights:\n", np.round(g.d_weights, 4))
print("d_bias:", np.round(g.d_bias, 4))
