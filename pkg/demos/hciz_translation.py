"""Spectra of sums of Hermitian matrices and the HCIZ kernel.

The Bessel function J(x, z) is the Haar average of exp tr(u x u* z). Its
product J(x, z) J(y, z) is the average of J(h, z) over the spectra h of
x + u y u*, which is how radial translation is defined. This script checks
that identity three ways and compares the density of the sum's eigenvalues
with a histogram of sampled spectra.
"""
import numpy as np

from radial_mra.hypergroup import TranslationDensity, marginal_histograms, mc_marginal_histograms, translate
from radial_mra.special_functions import bessel_J, bessel_J_montecarlo

x = np.array([2.0, 0.3, -1.4])
y = np.array([1.1, -0.2, -1.7])
z = np.array([0.9j, 0.1j, -0.6j])

closed = complex(bessel_J(x, z))
mean, err = bessel_J_montecarlo(x, z, 200_000, seed=1)
print(f"J(x, z) closed form  {closed:.10f}")
print(f"J(x, z) Haar average {mean:.10f} +- {err:.1e}")

target = complex(bessel_J(x, z) * bessel_J(y, z))
dens = translate(lambda h: bessel_J(h, z), x, y, backend="density")
mc = translate(lambda h: bessel_J(h, z), x, y, backend="montecarlo", samples=100_000, seed=2)
print(f"\nJ(x, z) J(y, z)          {target:.12f}")
print(f"translation, density     {complex(dens.value):.12f}")
print(f"translation, Monte-Carlo {complex(mc.value):.6f} +- {mc.error:.1e}")

print(f"\ndensity of delta_x * delta_y has mass {TranslationDensity(x, y).total_mass():.12f}")
probs, edges = marginal_histograms(x, y, 16)
freq = mc_marginal_histograms(x, y, edges, 200_000, seed=3)
print("largest eigenvalue: bin probabilities, exact vs sampled")
for a, b, p, m in zip(edges[0][:-1], edges[0][1:], probs[0], freq[0]):
    print(f"  [{a:6.2f}, {b:6.2f})  {p:.4f}  {m:.4f}")
