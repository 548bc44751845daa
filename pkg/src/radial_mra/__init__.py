"""Radial multiresolution analysis on the space of Hermitian matrices.

Subpackages: :mod:`weyl_core` (roots, chambers, lattices), :mod:`special_functions`
(HCIZ/Bessel kernel and Schur functions), :mod:`hypergroup` (spectral
translation), :mod:`hankel` (radial Fourier transform), :mod:`mra` (scaling
functions, filters, wavelets) and the command line in :mod:`cli`.
"""

__version__ = "0.1.0"
