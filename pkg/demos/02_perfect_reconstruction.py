"""Analysis and synthesis of signals and images with a lifted filter bank.

Run with ``python3 demos/02_perfect_reconstruction.py``.
"""
import numpy as np

from liftwave import analyze_1d, build_filters, build_matrices, dwt2, idwt2, synthesize_1d

rng = np.random.default_rng(1)
fp = build_filters([405 / 2357, -166 / 7071])

# In 1D the bank is a pair of circulant, 2x-decimating matrices.
am = build_matrices(fp, 16)
print("L is", am.L.shape, "and H is", am.H.shape, "; alignment", am.alignment)
print("condition number of [L; H]:", round(am.condition_number(), 3))

x = rng.normal(size=16)
low, high = analyze_1d(x, am)
print("1D round-trip error:", np.abs(synthesize_1d(low, high, am) - x).max())

# The 2D transform applies the same matrices along both axes.
img = np.zeros((32, 32))
img[:, 20:] = 1.0  # a vertical edge
s = dwt2(img, fp)
for name, band in zip(("ll", "lh", "hl", "hh"), s.as_array()):
    print(f"{name}: energy {np.sum(band ** 2):8.4f}")
print("2D round-trip error:", np.abs(idwt2(s, fp) - img).max())

# Energy is not preserved because the bank is biorthogonal, not orthogonal.
print("energy in:", np.sum(img ** 2), " energy out:", round(float(np.sum(s.as_array() ** 2)), 4))
