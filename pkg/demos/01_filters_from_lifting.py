"""Build tunable high-pass filters from a Haar pair by lifting.

Run with ``python3 demos/01_filters_from_lifting.py``.
"""
import numpy as np

from liftwave import build_filters, haar_base, solve_params
from liftwave.lifting import printed_h1, reference_h1

np.set_printoptions(precision=4, suppress=True)

# The starting point is the two-tap Haar pair.
base = haar_base()
print("Haar h0:", base.h0)
print("Haar h1:", base.h1)

# One lifting step adds four taps to h1; the low-pass never changes.
one = build_filters([880 / 7071])
print("\n1 step, a = 880/7071")
print("  h1 =", one.h1)
print("  reference taps =", printed_h1("bior1.3"))

two = build_filters([405 / 2357, -166 / 7071])
print("\n2 steps, a = (405/2357, -166/7071)")
print("  h1 =", two.h1)
print("  reference taps =", printed_h1("bior1.5"))

# Going the other way: a least-squares fit recovers the coefficients.
for name, steps in (("bior1.3", 1), ("bior1.5", 2)):
    fit = solve_params(reference_h1(name), steps)
    print(f"\nfit {name}: a = {fit.params.a}, residual = {fit.residual:.1e}")

# Any coefficients at all keep DC at zero and the Nyquist gain at sqrt(2).
rng = np.random.default_rng(0)
for _ in range(3):
    a = rng.normal(size=3)
    h1 = build_filters(a).h1
    nyq = abs(np.sum(h1 * (-1.0) ** np.arange(h1.size)))
    print(f"a = {a}: sum(h1) = {h1.sum():+.1e}, |H1(pi)| = {nyq:.12f}")
