"""Scaling functions on the Hankel side: periodization, Riesz bounds, Gram matrices.

A scaling function is stored through its Hankel transform. All criteria reduce
to lattice sums of |H phi|^2 and torus integrals against |Delta|^2, evaluated
with tensor Gauss-Legendre panels on the fundamental cell [-pi, pi)^n.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..hankel import AnalyticProfile
from ..special_functions import Partition, bessel_J, m_lambda, partitions, schur_S
from ..weyl_core import LatticePair, RootData, phase_alpha, vandermonde, weyl_denominator
from .periodic import (
    R_LATTICE,
    PeriodicSymmetricFunction,
    lattice_offsets,
    lattice_sum,
    reduce_mod,
    torus_volume,
)

__all__ = [
    "RieszBasisError",
    "ScalingFunction",
    "panel_rule",
    "cell_rule",
    "periodization",
    "riesz_bounds",
    "orthonormalize",
    "torus_gram",
    "gram_matrix",
    "direct_gram",
    "TwoScaleResult",
    "two_scale_constant",
    "two_scale_check",
    "two_scale_coefficients",
    "membership_symbol",
    "shift_noninvariance_check",
]

DEFAULT_ORDER = {2: 32, 3: 16}
# |Delta H phi| below this fraction of its maximum counts as "H phi vanishes"
RATIO_FLOOR = 1e-10


class RieszBasisError(ValueError):
    """P_phi is not bounded away from 0 and infinity on the grid."""


def panel_rule(a: float, b: float, breaks: Sequence[float] = (), order: int = 32):
    """Gauss-Legendre nodes and weights on [a, b] split at the given interior points."""
    cuts = sorted({a, b, *[c for c in breaks if a < c < b]})
    g, w = np.polynomial.legendre.leggauss(order)
    ts, ws = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        ts.append(0.5 * (hi - lo) * g + 0.5 * (hi + lo))
        ws.append(0.5 * (hi - lo) * w)
    return np.concatenate(ts), np.concatenate(ws)


def cell_rule(n: int, breaks: Sequence[float] = (), order: int = 32, half_width: float = np.pi):
    """Tensor rule on [-h, h]^n as flattened (points, Lebesgue weights)."""
    t, w = panel_rule(-half_width, half_width, breaks, order)
    pts = np.stack(np.meshgrid(*([t] * n), indexing="ij"), axis=-1).reshape(-1, n)
    wts = functools.reduce(np.multiply.outer, [w] * n).reshape(-1)
    return pts, wts


@dataclass(frozen=True)
class ScalingFunction:
    """A radial scaling function given by its Hankel transform ``freq``.

    ``breakpoints`` lists per-axis points in [-pi, pi] where the periodized
    profile may have kinks; quadrature panels are split there.
    """

    freq: AnalyticProfile
    lattice: LatticePair
    breakpoints: Tuple[float, ...] = ()
    radius: float = R_LATTICE
    name: str = "phi"

    @classmethod
    def from_profile(cls, freq: AnalyticProfile, breakpoints=(), radius: float = R_LATTICE, name=None):
        return cls(freq, LatticePair(freq.n), tuple(float(b) for b in breakpoints), radius, name or freq.name)

    @property
    def n(self) -> int:
        return self.freq.n

    def __call__(self, xi) -> np.ndarray:
        return self.freq(xi)

    def periodization(self, xi) -> np.ndarray:
        """P_phi(xi) = (1/n!) sum_{q in I} |H phi(xi + q)|^2."""
        vals = lattice_sum(lambda p: np.abs(self.freq(p)) ** 2, xi, self.radius,
                           support_radius=self.freq.support_radius)
        return vals / math.factorial(self.n)

    @functools.cached_property
    def _bounds(self) -> Tuple[float, float]:
        return riesz_bounds(self)

    @property
    def riesz_A(self) -> float:
        return self._bounds[0]

    @property
    def riesz_B(self) -> float:
        return self._bounds[1]

    def scaled(self, c: complex) -> "ScalingFunction":
        return replace(self, freq=self.freq.scaled(c))


def periodization(phi: ScalingFunction, m: Optional[int] = None) -> PeriodicSymmetricFunction:
    """P_phi as a periodic symmetric symbol (sampled on an m-grid when m is given)."""
    return PeriodicSymmetricFunction.from_callable(phi.periodization, phi.n, m, name=f"P[{phi.name}]")


def _chamber(points) -> np.ndarray:
    return np.all(np.diff(points, axis=-1) < 0, axis=-1)


def riesz_bounds(phi: ScalingFunction, order: Optional[int] = None) -> Tuple[float, float]:
    """Grid essential inf and sup of P_phi over chamber nodes of the fundamental cell."""
    order = order or DEFAULT_ORDER.get(phi.n, 12)
    pts, _ = cell_rule(phi.n, phi.breakpoints, order)
    pts = pts[_chamber(pts)]
    p = phi.periodization(pts)
    return float(np.min(p)), float(np.max(p))


def orthonormalize(phi: ScalingFunction, order: Optional[int] = None) -> ScalingFunction:
    """H phi* = H phi / sqrt(P_phi)."""
    a, b = riesz_bounds(phi, order)
    if not (a > 0 and np.isfinite(b)):
        raise RieszBasisError(f"Riesz bounds ({a:.3e}, {b:.3e}) violate 0 < A <= B < inf")
    base = phi.freq.func
    period = phi.periodization

    def func(xi):
        return base(xi) / np.sqrt(period(xi))

    freq = replace(phi.freq, func=func, name=f"{phi.freq.name}*")
    return replace(phi, freq=freq, name=f"{phi.name}*")


def _as_partitions(n: int, lam_max) -> list:
    if isinstance(lam_max, int):
        return partitions(n, lam_max)
    return [p if isinstance(p, Partition) else Partition(tuple(p)) for p in lam_max]


def torus_gram(n: int, parts, weight, breakpoints=(), order: Optional[int] = None) -> np.ndarray:
    """G[l, m] = int_T S_l conj(S_m) weight |Delta|^2 d mu, mu the normalized Haar measure."""
    order = order or DEFAULT_ORDER.get(n, 12)
    pts, wts = cell_rule(n, breakpoints, order)
    wts = wts / torus_volume(n)
    d2 = np.abs(weyl_denominator(pts)) ** 2
    s = np.stack([schur_S(p, pts) for p in parts])
    wv = np.asarray(weight(pts)) * d2 * wts
    return (s * wv) @ s.conj().T


def gram_matrix(phi: ScalingFunction, lam_max=4, order: Optional[int] = None, other: Optional[ScalingFunction] = None):
    """Gram matrix of {M_lambda T^(lambda) phi} by the torus integral with P-kernel.

    With ``other`` the cross kernel P_{phi, other} = (1/n!) sum_q H phi conj(H other)
    is used instead. Rows and columns follow :func:`partitions` order.
    """
    n = phi.n
    parts = _as_partitions(n, lam_max)
    if other is None:
        weight = phi.periodization
    else:
        sr = phi.freq.support_radius
        if sr is not None and other.freq.support_radius is not None:
            sr = max(sr, other.freq.support_radius)
        else:
            sr = None

        def weight(p):
            return cross_periodization(phi.freq, other.freq, p, phi.radius, sr)

    breaks = tuple(sorted(set(phi.breakpoints) | set(other.breakpoints if other else ())))
    return torus_gram(n, parts, weight, breaks, order), parts


def cross_periodization(f: AnalyticProfile, g: AnalyticProfile, xi, radius: float = R_LATTICE,
                        support_radius: Optional[float] = None) -> np.ndarray:
    """(1/n!) sum_q f(xi + q) conj(g(xi + q)), complex valued."""
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    flat = xi.reshape(-1, n)
    if support_radius is not None:
        radius = min(radius, support_radius)
    total = np.zeros(flat.shape[0], dtype=complex)
    for q in lattice_offsets(n, radius):
        pts = flat + q
        inside = np.max(np.abs(pts), axis=-1) <= radius
        if np.any(inside):
            total[inside] += f(pts[inside]) * np.conj(g(pts[inside]))
    return (total / math.factorial(n)).reshape(xi.shape[:-1])


def direct_gram(phi: ScalingFunction, lam_max=4, order: int = 48, half_width: Optional[float] = None):
    """Gram matrix in L^2(chamber, omega) by the unperiodized Lebesgue frequency integral.

    <M_l T^(l) phi, M_m T^(m) phi> = (1/n!) int_{R^n} S_l conj(S_m) |Delta|^2 |H phi|^2 d xi.
    Differs from :func:`gram_matrix` by the factor (2 pi)^n of the torus measure.
    """
    n = phi.n
    parts = _as_partitions(n, lam_max)
    h = half_width or phi.freq.support_radius
    if h is None:
        raise ValueError("direct_gram needs a compactly supported profile or an explicit half_width")
    breaks = [b + 2 * np.pi * k for b in phi.breakpoints for k in range(-4, 5)]
    pts, wts = cell_rule(n, breaks, order, h)
    d2 = np.abs(weyl_denominator(pts)) ** 2
    s = np.stack([schur_S(p, pts) for p in parts])
    wv = d2 * np.abs(phi.freq(pts)) ** 2 * wts / math.factorial(n)
    return (s * wv) @ s.conj().T, parts


def two_scale_constant(n: int) -> complex:
    """c with gamma = c sum_l alpha_l S_l, for the unitary dilation D_a = a^{-n^2/2} f(./a)."""
    q = RootData(n).q
    return 2 ** (-n / 2) * (1j) ** q * math.sqrt(math.factorial(n))


@dataclass(frozen=True)
class TwoScaleResult:
    gamma: PeriodicSymmetricFunction
    residual: float
    symmetry_defect: float
    undefined_fraction: float

    def holds(self, tol: float = 1e-8) -> bool:
        return self.residual <= tol and self.symmetry_defect <= tol


def _inverse_delta(xi) -> np.ndarray:
    # Delta(2x) / Delta(x) = prod_{i<j} 2 cos((x_i - x_j) / 2)
    n = xi.shape[-1]
    out = np.ones(xi.shape[:-1])
    for i in range(n):
        for j in range(i + 1, n):
            out = out * 2 * np.cos(0.5 * (xi[..., i] - xi[..., j]))
    return out


def two_scale_check(phi: ScalingFunction, gamma: Optional[PeriodicSymmetricFunction] = None,
                    m: int = 24, extent: float = 2.0) -> TwoScaleResult:
    """Test Delta(2 xi) H phi(2 xi) = gamma(xi) Delta(xi) H phi(xi).

    Without ``gamma`` the ratio is read off on the fundamental cell [-pi, pi)^n
    and extended I-periodically. Both sides are then compared on a midpoint
    grid over [-extent pi, extent pi)^n after dividing out Delta(xi): the
    residual is the largest pointwise relative mismatch
    |a - b| / (|a| + |b|) where either side is above a small floor.
    """
    n = phi.n
    t = 2 * np.pi * (np.arange(m) + 0.5) / m - np.pi
    cell = np.stack(np.meshgrid(*([t] * n), indexing="ij"), axis=-1).reshape(-1, n)
    und = 0.0
    if gamma is None:
        den = phi(cell)
        floor = RATIO_FLOOR * max(float(np.max(np.abs(den))), np.finfo(float).tiny)
        und = float(np.mean(np.abs(den) <= floor))
        if und > 0.5:
            raise ValueError(f"two-scale ratio undefined on {und:.0%} of the cell")

        def ratio(xi):
            xi0 = reduce_mod(xi, center=True)
            d = phi(xi0)
            ok = np.abs(d) > floor
            out = np.zeros(d.shape, dtype=complex)
            out[ok] = _inverse_delta(xi0[ok]) * phi(2 * xi0[ok]) / d[ok]
            return out

        gamma = PeriodicSymmetricFunction(n, ratio, name=f"gamma[{phi.name}]")

    ts = extent * (2 * np.pi * (np.arange(2 * m) + 0.5) / (2 * m) - np.pi)
    pts = np.stack(np.meshgrid(*([ts] * n), indexing="ij"), axis=-1).reshape(-1, n)
    lhs = _inverse_delta(pts) * phi(2 * pts)
    rhs = gamma(pts) * phi(pts)
    a, b = np.abs(lhs), np.abs(rhs)
    keep = (a > RATIO_FLOOR * max(float(a.max()), np.finfo(float).tiny)) | (
        b > RATIO_FLOOR * max(float(b.max()), np.finfo(float).tiny))
    residual = float(np.max(np.abs(lhs - rhs)[keep] / (a + b)[keep])) if np.any(keep) else 0.0
    return TwoScaleResult(gamma, residual, gamma.symmetry_defect(cell), und)


def two_scale_coefficients(gamma: PeriodicSymmetricFunction, lam_max=4, breakpoints=(), order: Optional[int] = None):
    """alpha_l = <gamma, S_l>_S / c, the expansion of phi_{-1,0} in {phi_{0,l}}."""
    n = gamma.n
    parts = _as_partitions(n, lam_max)
    order = order or DEFAULT_ORDER.get(n, 12)
    pts, wts = cell_rule(n, breakpoints, order)
    wts = wts / torus_volume(n)
    d2 = np.abs(weyl_denominator(pts)) ** 2
    g = gamma(pts)
    coeffs = np.array([np.sum(g * np.conj(schur_S(p, pts)) * d2 * wts) for p in parts])
    return coeffs / two_scale_constant(n), parts


def membership_symbol(phi: ScalingFunction, coeffs: Dict, xi) -> np.ndarray:
    """pi H f / (Delta H phi) for f = sum_l a_l M_l T^(l) phi, with H f built from J.

    Where H phi or Delta vanishes the value is nan.
    """
    xi = np.asarray(xi, dtype=float)
    hphi = phi(xi)
    hf = np.zeros(xi.shape[:-1], dtype=complex)
    for lam, a in coeffs.items():
        lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
        hf = hf + a * m_lambda(lam) * bessel_J(xi, 1j * lam.shifted()) * hphi
    den = weyl_denominator(xi) * hphi
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.abs(den) > 0, vandermonde(xi) * hf / den, np.nan)


def _alpha_lattice(q) -> np.ndarray:
    """alpha(q) on I, exactly +-1."""
    n = q.shape[-1]
    l = np.rint(q / (2 * np.pi)).astype(np.int64).sum(axis=-1)
    return np.where(((n - 1) * l) % 2 == 0, 1.0, -1.0)


def shift_noninvariance_check(phi_star: ScalingFunction, lam=None, coeffs: Optional[Dict] = None,
                              threshold: float = 0.01, order: Optional[int] = None):
    """Relative distance of T^(lambda) f from V_0, for f = sum_m a_m M_m T^(m) phi*.

    Returns ``(flag, residual)`` with flag true when the residual exceeds
    ``threshold``. The default is f = M_0 T^(0) phi* and lambda = 0.
    """
    n = phi_star.n
    lam = Partition((0,) * n) if lam is None else (lam if isinstance(lam, Partition) else Partition(tuple(lam)))
    coeffs = {Partition((0,) * n): 1.0} if coeffs is None else coeffs
    if all(a == 0 for a in coeffs.values()):
        return False, 0.0
    order = order or DEFAULT_ORDER.get(n, 12)
    shift = 1j * lam.shifted()

    def hg_pi(xi):
        # pi H g with H g = J(., i(lam+rho)) H f and pi H f = sum a_m Delta S_m H phi*
        acc = np.zeros(xi.shape[:-1], dtype=complex)
        for mu, a in coeffs.items():
            acc = acc + a * schur_S(mu, xi)
        return bessel_J(xi, shift) * weyl_denominator(xi) * acc * phi_star(xi)

    support = phi_star.freq.support_radius
    radius = phi_star.radius if support is None else support
    pts, wts = cell_rule(n, phi_star.breakpoints, order)
    b = np.zeros(pts.shape[0], dtype=complex)
    norm_g = 0.0
    for q in lattice_offsets(n, radius):
        shifted = pts + q
        inside = np.max(np.abs(shifted), axis=-1) <= radius
        if not np.any(inside):
            continue
        vals = hg_pi(shifted[inside])
        norm_g += float(np.sum(np.abs(vals) ** 2 * wts[inside]))
        b[inside] += vals * np.conj(phi_star(shifted[inside])) * _alpha_lattice(q[None, :])[0]
    fact = math.factorial(n)
    norm_g /= fact
    proj = float(np.sum(np.abs(b) ** 2 * wts)) / fact**2
    residual = math.sqrt(max(norm_g - proj, 0.0) / norm_g)
    return residual > threshold, residual
