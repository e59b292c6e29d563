"""Magnitude responses of the Haar and lifted high-pass filters.

Run with ``python3 demos/03_frequency_response.py [out_dir]``.  CSV files
are written to ``out_dir`` when one is given.
"""
import sys
from pathlib import Path

import numpy as np

from liftwave import build_filters, freqz
from liftwave.cli import write_freqz_csv

filters = {
    "haar": build_filters([]),
    "bior1.3": build_filters([880 / 7071]),
    "bior1.5": build_filters([405 / 2357, -166 / 7071]),
}

# A coarse text plot: each row is one frequency, each column one filter.
K = 17  # samples include both 0 and pi, so index 8 is pi/2
responses = {name: freqz(fp.h1, K) for name, fp in filters.items()}
print("omega/pi " + "".join(f"{name:>10}" for name in responses))
for i in range(K):
    w = responses["haar"].omega[i] / np.pi
    print(f"{w:8.3f} " + "".join(f"{r.magnitude[i]:10.4f}" for r in responses.values()))

# Every filter crosses 1 at pi/2; more lifting steps suppress the low band
# harder and approach sqrt(2) sooner in the high band.
for name, r in responses.items():
    lo, mid, hi = r.magnitude[[4, 8, 12]]
    print(f"{name}: |H1| at pi/4, pi/2, 3pi/4 = {lo:.4f}, {mid:.4f}, {hi:.4f}")

if len(sys.argv) > 1:
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    for name, fp in filters.items():
        with open(out / f"{name}_h1.csv", "w", newline="") as fh:
            write_freqz_csv(freqz(fp.h1, 512), fh)
    print("wrote CSV files to", out)
