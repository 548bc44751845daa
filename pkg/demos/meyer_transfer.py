"""From a classical scaling function to a radial one.

A permutation-invariant classical scaling function (here the tensor Meyer
profile) becomes a radial one after multiplying by the phase alpha and
sqrt(n!) (2 pi)^{n/2}. Its low-pass filter is a smooth QMF; completing it
to a unitary matrix by a Householder reflection gives the wavelets.
"""
import numpy as np

from radial_mra.mra import (
    cross_periodization_matrix,
    meyer_family,
    qmf_check,
    riesz_bounds,
    shift_noninvariance_check,
    two_scale_check,
    unitarity_deviation,
    wavelet_matrix,
)

fam = meyer_family(2)
a, b = riesz_bounds(fam.phi)
print(f"Riesz bounds of the radial Meyer function: [{a:.15f}, {b:.15f}]")
print(f"two-scale residual {two_scale_check(fam.phi).residual:.1e}")
print(f"QMF deviation of the filter {qmf_check(fam.G):.1e}")

rng = np.random.default_rng(5)
mats, _ = wavelet_matrix(fam, rng.uniform(0, 2 * np.pi, size=(5000, 2)))
print(f"unitarity deviation over 5000 frequencies {unitarity_deviation(mats):.1e}")
p = cross_periodization_matrix(fam, rng.uniform(0, 2 * np.pi, size=(50, 2)))
print(f"cross-periodization P_ij - delta_ij: {np.max(np.abs(p - np.eye(fam.count))):.1e}")

# ordinary translates of a radial function are not radial, and V_0 is not closed under them
_, res = shift_noninvariance_check(fam.phi)
print(f"relative distance of a translated phi from V_0: {res:.3f}")
