"""Concrete scaling functions: radial Shannon, classical-to-radial transfer, Meyer and Gaussian."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from ..hankel import AnalyticProfile
from ..weyl_core import LatticePair, phase_alpha
from .filters import FilterFunction, WaveletFamily, alpha_phase, inverse_delta_ratio, wavelet_construct
from .periodic import PeriodicSymmetricFunction, reduce_mod
from .scaling import RieszBasisError, ScalingFunction, gram_matrix, riesz_bounds

__all__ = [
    "NORMALIZATIONS",
    "shannon_kappa",
    "cube_indicator",
    "q_indicator",
    "shannon_scaling",
    "shannon_filter",
    "shannon_family",
    "ShannonCalibration",
    "calibrate_shannon",
    "classical_to_radial",
    "classical_shannon_hat",
    "meyer_hat",
    "meyer_m0",
    "meyer_filter",
    "gaussian_scaling",
]

NORMALIZATIONS = ("gram", "literal")
SYMMETRY_TOL = 1e-12


def shannon_kappa(n: int, normalization: str = "gram") -> float:
    """kappa_n = sqrt(n!) ("gram", P_phi = 1) or 1 ("literal" reading, P_phi = 1/n!)."""
    if normalization == "gram":
        return math.sqrt(math.factorial(n))
    if normalization == "literal":
        return 1.0
    raise ValueError(f"unknown normalization {normalization!r}")


def cube_indicator(xi, half: float = np.pi) -> np.ndarray:
    """chi of the half-open cube [-half, half)^n."""
    xi = np.asarray(xi, dtype=float)
    return np.all((xi >= -half) & (xi < half), axis=-1).astype(float)


def q_indicator(xi, shift=None) -> np.ndarray:
    """chi of Q^i = q^i + union_l (2 pi l + [-pi/2, pi/2)^n), with q^i = ``shift``."""
    xi = np.asarray(xi, dtype=float)
    if shift is not None:
        xi = xi - np.asarray(shift, dtype=float)
    return cube_indicator(reduce_mod(xi, center=True), np.pi / 2)


def shannon_scaling(n: int, kappa: Optional[float] = None) -> ScalingFunction:
    """H phi = kappa alpha chi_{[-pi, pi)^n}."""
    kappa = shannon_kappa(n) if kappa is None else kappa

    def func(xi):
        xi = np.asarray(xi, dtype=float)
        return kappa * phase_alpha(xi) * cube_indicator(xi)

    prof = AnalyticProfile(func, n, f"shannon(kappa={kappa:.6g})", np.pi)
    return ScalingFunction.from_profile(prof, name="shannon")


def shannon_filter(n: int) -> FilterFunction:
    """G = alpha chi_Q."""
    return FilterFunction(n, q_indicator, alpha_phase, "shannon")


def shannon_family(n: int, kappa: Optional[float] = None) -> WaveletFamily:
    """The radial Shannon scaling function and its 2^n - 1 wavelets.

    beta^i = chi_{Q^i} / (alpha delta) for i >= 1, so that
    H psi^i(2 xi) = kappa chi_{Q^i cap [-pi, pi)^n}(xi).
    """
    kappa = shannon_kappa(n) if kappa is None else kappa
    phi = shannon_scaling(n, kappa)
    G = shannon_filter(n)
    reps = LatticePair(n).coset_reps

    def make_row(p):
        def row(xi):
            xi = np.asarray(xi, dtype=float)
            return q_indicator(xi, p) * np.conj(phase_alpha(xi))

        return row

    def make_profile(i, p):
        def func(zeta):
            half = 0.5 * np.asarray(zeta, dtype=float)
            return kappa * q_indicator(half, p) * cube_indicator(half)

        return AnalyticProfile(func, n, f"shannon_psi{i}", 2 * np.pi)

    rows = [G] + [make_row(p) for p in reps[1:]]
    profiles = [make_profile(i, p) for i, p in enumerate(reps[1:], start=1)]
    return WaveletFamily(phi, G, rows, profiles, "shannon")


def shannon_gamma(n: int) -> PeriodicSymmetricFunction:
    """gamma = G / delta for the Shannon filter."""
    G = shannon_filter(n)

    def func(xi):
        xi = np.asarray(xi, dtype=float)
        return G(xi) * inverse_delta_ratio(xi)

    return PeriodicSymmetricFunction(n, func, name="gamma[shannon]")


@dataclass(frozen=True)
class ShannonCalibration:
    """Gram calibration of kappa_n and the residuals of both candidates."""

    n: int
    kappa: float
    candidates: Dict[str, float]
    p_deviation: Dict[str, float]
    gram_deviation: Dict[str, float]
    tol_p: float = 1e-12
    tol_gram: float = 1e-6

    def passes(self, name: str) -> bool:
        return self.p_deviation[name] <= self.tol_p and self.gram_deviation[name] <= self.tol_gram

    @property
    def accepted(self):
        return [k for k in self.candidates if self.passes(k)]


def calibrate_shannon(n: int, lam_max: int = 4, order: Optional[int] = None) -> ShannonCalibration:
    """Fix kappa_n by requiring the torus Gram matrix of the Shannon system to be the identity.

    With kappa = 1 the Gram matrix is g I; the calibrated value is 1/sqrt(g).
    Both candidate normalizations are then evaluated independently.
    """
    base, _ = gram_matrix(shannon_scaling(n, 1.0), lam_max, order)
    g = float(np.mean(np.real(np.diag(base))))
    kappa = 1.0 / math.sqrt(g)
    cands = {name: shannon_kappa(n, name) for name in NORMALIZATIONS}
    p_dev, g_dev = {}, {}
    for name, k in cands.items():
        phi = shannon_scaling(n, k)
        a, b = riesz_bounds(phi, order)
        p_dev[name] = max(abs(a - 1.0), abs(b - 1.0))
        gm, _ = gram_matrix(phi, lam_max, order)
        g_dev[name] = float(np.max(np.abs(gm - np.eye(gm.shape[0]))))
    return ShannonCalibration(n, kappa, cands, p_dev, g_dev)


def classical_shannon_hat(n: int) -> Callable:
    """(2 pi)^{-n/2} chi_{[-pi, pi)^n}, the classical orthonormal Shannon profile."""

    def func(xi):
        return (2 * np.pi) ** (-n / 2) * cube_indicator(xi)

    return func


def _nu(x):
    x = np.clip(x, 0.0, 1.0)
    return x**4 * (35 - 84 * x + 70 * x**2 - 20 * x**3)


def meyer_hat(t) -> np.ndarray:
    """One-dimensional Meyer scaling profile, with sum_l |.(t + 2 pi l)|^2 = 1/(2 pi)."""
    a = np.abs(np.asarray(t, dtype=float))
    val = np.cos(0.5 * np.pi * _nu(3 * a / (2 * np.pi) - 1))
    val = np.where(a <= 2 * np.pi / 3, 1.0, val)
    val = np.where(a >= 4 * np.pi / 3, 0.0, val)
    return val / math.sqrt(2 * np.pi)


def meyer_m0(t) -> np.ndarray:
    """2 pi-periodic Meyer low-pass filter, m0(t) = sqrt(2 pi) meyer_hat(2 t) on [-pi, pi)."""
    t0 = reduce_mod(t, center=True)
    return math.sqrt(2 * np.pi) * meyer_hat(2 * t0)


def tensor_meyer_hat(n: int) -> Callable:
    def func(xi):
        xi = np.asarray(xi, dtype=float)
        return np.prod(meyer_hat(xi), axis=-1)

    return func


def meyer_filter(n: int) -> FilterFunction:
    """G = alpha prod_k m0(xi_k), a smooth S_n-invariant QMF filter."""

    def modulus(xi):
        return np.prod(meyer_m0(np.asarray(xi, dtype=float)), axis=-1)

    return FilterFunction(n, modulus, alpha_phase, "meyer")


MEYER_BREAKS = (-2 * np.pi / 3, 2 * np.pi / 3)


def classical_to_radial(phi_hat: Callable, n: int, normalization: str = "gram",
                        support_radius: Optional[float] = None, breakpoints=(),
                        symmetry_tol: float = SYMMETRY_TOL, seed: int = 0, name: str = "classical") -> ScalingFunction:
    """H phi = s (2 pi)^{n/2} alpha(xi) phi_hat(xi), s = sqrt(n!) for "gram", 1 for "literal".

    Rejects a non-symmetric ``phi_hat`` and profiles failing the Riesz bounds.
    """
    s = shannon_kappa(n, normalization)
    pts = np.random.default_rng(seed).uniform(-2 * np.pi, 2 * np.pi, size=(256, n))
    base = np.asarray(phi_hat(pts))
    worst = 0.0
    for k in range(n - 1):
        p = pts.copy()
        p[:, [k, k + 1]] = p[:, [k + 1, k]]
        worst = max(worst, float(np.max(np.abs(np.asarray(phi_hat(p)) - base))))
    if worst > symmetry_tol:
        raise ValueError(f"classical profile is not S_n-invariant (defect {worst:.2e})")
    c = s * (2 * np.pi) ** (n / 2)

    def func(xi):
        xi = np.asarray(xi, dtype=float)
        return c * phase_alpha(xi) * np.asarray(phi_hat(xi))

    prof = AnalyticProfile(func, n, name, support_radius)
    phi = ScalingFunction.from_profile(prof, breakpoints, name=name)
    a, b = riesz_bounds(phi)
    if not (a > 0 and np.isfinite(b)):
        raise RieszBasisError(f"Riesz bounds ({a:.3e}, {b:.3e}) fail for {name}")
    return phi


def meyer_scaling(n: int, normalization: str = "gram") -> ScalingFunction:
    return classical_to_radial(tensor_meyer_hat(n), n, normalization, 4 * np.pi / 3, MEYER_BREAKS, name="meyer")


def meyer_family(n: int) -> WaveletFamily:
    return wavelet_construct(meyer_filter(n), meyer_scaling(n), name="meyer")


def gaussian_scaling(n: int, width: float = 1.0, scale: float = 1.0) -> ScalingFunction:
    """H phi = scale * alpha exp(-|xi|^2 / (2 width^2)); Riesz but not orthonormal, no two-scale relation."""

    def func(xi):
        xi = np.asarray(xi, dtype=float)
        return scale * phase_alpha(xi) * np.exp(-0.5 * np.sum(xi**2, axis=-1) / width**2)

    prof = AnalyticProfile(func, n, f"gaussian(w={width:g})")
    # |H phi|^2 < e^{-36} beyond 6 widths; the last lattice shell carries that tail
    return ScalingFunction.from_profile(prof, radius=2 * np.pi + 6 * width, name="gaussian")
