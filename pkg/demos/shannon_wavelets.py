"""The radial Shannon scaling function and its 2^n - 1 wavelets.

H phi is kappa alpha times the indicator of [-pi, pi)^n. The constant kappa
is fixed by asking the translated system to be orthonormal; the two
candidates sqrt(n!) and 1 are then compared. The wavelet symbols form a
unitary matrix at every frequency, and in the plane the wavelets split the
square into four quarters, drawn below as text.
"""
import math

import numpy as np

from radial_mra.mra import (
    calibrate_shannon,
    qmf_check,
    shannon_family,
    unitarity_deviation,
    wavelet_matrix,
)
from radial_mra.suites import support_panels

for n in (2, 3):
    cal = calibrate_shannon(n)
    print(f"n = {n}: calibrated kappa = {cal.kappa:.12f} (sqrt(n!) = {math.sqrt(math.factorial(n)):.12f})")
    for name in cal.candidates:
        verdict = "accepted" if cal.passes(name) else "rejected"
        print(f"  {name:8s} {verdict}: |P - 1| = {cal.p_deviation[name]:.2e}, |Gram - I| = {cal.gram_deviation[name]:.2e}")
    fam = shannon_family(n)
    xi = np.random.default_rng(0).uniform(0, 2 * np.pi, size=(2000, n))
    mats, _ = wavelet_matrix(fam, xi)
    print(f"  QMF deviation {qmf_check(fam.G)}, unitarity deviation {unitarity_deviation(mats):.1e}, {fam.count} wavelets")

masks, _, _ = support_panels(16)
print("\nsupports inside [-pi, pi)^2 (first coordinate to the right, second upward)")
rows = []
for i, m in enumerate(masks):
    rows.append([f"Q{i}".ljust(16)] + ["".join("#" if m[a, b] else "." for a in range(16)) for b in range(15, -1, -1)])
for line in zip(*rows):
    print("   ".join(line))
