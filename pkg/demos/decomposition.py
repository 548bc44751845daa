"""Projections onto the nested spaces V_j.

A smooth bump is sampled on the spatial grid, transformed, and projected
onto V_j for a range of levels with the Shannon scaling function. The
projection norms grow from almost nothing to almost all of the energy; a
band-limited function is captured exactly once 2^j pi covers its band.
"""
import math

from radial_mra.hankel import RadialFunctionGrid, default_grid
from radial_mra.mra import decompose, max_resolved_level, shannon_scaling
from radial_mra.suites import band_profile, bump

phi = shannon_scaling(2)
f = RadialFunctionGrid.from_function(bump, default_grid(2))
top = max_resolved_level(f.grid, phi)
tree = decompose(f, phi, (-8, top), lam_max=6)
norm = math.sqrt(tree.norm_sq)
print(f"bump, ||f|| = {norm:.6f}; the grid resolves levels up to j = {top}")
for j in tree.levels:
    print(f"  j = {j:3d}   ||P_j f|| / ||f|| = {tree.projection_norm(j) / norm:.6f}")

prof = band_profile(2, b=2.5)
tree = decompose(prof, phi, (-2, 2), lam_max=6)
norm = math.sqrt(tree.norm_sq)
print("\nband-limited f with H f supported in [-2.5, 2.5]^2")
for j in tree.levels:
    print(f"  j = {j:3d}   ||f - P_j f|| / ||f|| = {tree.residual_norm(j) / norm:.2e}")
