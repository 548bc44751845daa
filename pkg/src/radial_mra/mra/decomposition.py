"""Multiscale decomposition P_j f on the Hankel side.

For the level-j system phi*_{j,l} = D_{2^-j}(M_l T^(l) phi*) one has

    <f, phi*_{j,l}> = (2^{j n^2/2} / n!) int_{cell} B_j(u) conj(Delta S_l)(u) du,
    B_j(u) = sum_{q in I} alpha(q) 2^{-j |Sigma_+|} (pi Hf)(2^j (u + q)) conj(H phi*)(u + q),

and the (Delta S_l) are orthogonal on the cell with squared norm (2 pi)^n.
Coefficients are reported against the L^2(omega)-orthonormal system
(2 pi)^{-n/2} phi*_{j,l}; ||P_j f||^2 follows from Parseval on the cell,
independent of the partition truncation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..hankel import AnalyticProfile, RadialFunctionGrid, hankel_pi_tensor
from ..special_functions import Partition, partitions
from ..weyl_core import RootData, permutations_with_sign, vandermonde
from .periodic import torus_volume
from .scaling import DEFAULT_ORDER, ScalingFunction, cell_rule, panel_rule

__all__ = ["TruncationTooSmall", "CoefficientTree", "decompose", "frequency_norm", "max_resolved_level"]

TAIL_WARN = 1e-6
# space samples on a Gauss-Legendre grid of N nodes over [-R, R] resolve e^{i x y} for |y| R <= RESOLUTION N
RESOLUTION = 0.8


class TruncationTooSmall(ValueError):
    """The partition truncation leaves too much energy outside the coefficient table."""


def max_resolved_level(grid, phi: ScalingFunction) -> int:
    """Largest j for which the space grid resolves the frequencies 2^j supp H phi."""
    reach = phi.radius if phi.freq.support_radius is None else phi.freq.support_radius
    return int(math.floor(math.log2(RESOLUTION * grid.nodes_per_axis / (grid.radius * reach))))


@dataclass(frozen=True)
class CoefficientTree:
    """Coefficients <f, e_{j,l}> for levels j and partitions l, with per-level energies."""

    levels: Tuple[int, ...]
    parts: Tuple[Partition, ...]
    coeffs: np.ndarray
    energies: np.ndarray
    norm_sq: float

    def level_index(self, j: int) -> int:
        return self.levels.index(j)

    def projection_norm(self, j: int) -> float:
        """||P_j f||_2 from Parseval (all partitions)."""
        return math.sqrt(max(float(self.energies[self.level_index(j)]), 0.0))

    def residual_norm(self, j: int) -> float:
        """||f - P_j f||_2 = sqrt(||f||^2 - ||P_j f||^2)."""
        return math.sqrt(max(self.norm_sq - float(self.energies[self.level_index(j)]), 0.0))

    def tail(self, j: int) -> float:
        """Energy of P_j f outside the partition truncation."""
        k = self.level_index(j)
        return float(self.energies[k] - np.sum(np.abs(self.coeffs[k]) ** 2))

    def bessel_ok(self, rtol: float = 1e-9) -> bool:
        kept = np.sum(np.abs(self.coeffs) ** 2, axis=1)
        return bool(np.all(kept <= self.norm_sq * (1 + rtol)) and np.all(self.energies <= self.norm_sq * (1 + rtol)))


def frequency_norm(f: AnalyticProfile, order: int = 48) -> float:
    """||f||_2 = ||Hf|| for a compactly supported frequency profile."""
    if f.support_radius is None:
        raise ValueError("frequency profile needs a support radius")
    pts, wts = cell_rule(f.n, (), order, f.support_radius)
    val = np.sum(np.abs(f(pts) * vandermonde(pts)) ** 2 * wts) / math.factorial(f.n)
    return math.sqrt(float(val))


def _shift_range(radius: float) -> np.ndarray:
    """Integers l with [-pi, pi] + 2 pi l meeting the open box |x| < radius."""
    k = int(math.ceil((radius + np.pi) / (2 * np.pi)))
    ls = np.arange(-k, k + 1)
    return ls[2 * np.pi * np.abs(ls) - np.pi < radius]


def _level_B(f, phi: ScalingFunction, j: int, t: np.ndarray, c_h: Optional[float]) -> np.ndarray:
    """B_j on the cell tensor grid t^n."""
    n = phi.n
    npos = RootData(n).q
    radius = phi.radius if phi.freq.support_radius is None else phi.freq.support_radius
    if isinstance(f, AnalyticProfile) and f.support_radius is not None:
        radius = min(radius, f.support_radius * 2.0 ** (-j))
    ls = _shift_range(radius)
    big = (t[None, :] + 2 * np.pi * ls[:, None]).reshape(-1)
    nb, nt = len(ls), len(t)
    if isinstance(f, RadialFunctionGrid):
        vals = hankel_pi_tensor(f, 2.0**j * big, c_h)
    else:
        pts = np.stack(np.meshgrid(*([2.0**j * big] * n), indexing="ij"), axis=-1)
        vals = f(pts) * vandermonde(pts)
    pts = np.stack(np.meshgrid(*([big] * n), indexing="ij"), axis=-1)
    inside = np.max(np.abs(pts), axis=-1) <= radius
    vals = np.where(inside, vals * np.conj(phi(pts)), 0.0) * 2.0 ** (-j * npos)
    # alpha(2 pi l) = (-1)^{(n-1) sum l}
    lsum = sum(np.meshgrid(*([np.repeat(ls, nt)] * n), indexing="ij"))
    vals = vals * np.where(((n - 1) * lsum) % 2 == 0, 1.0, -1.0)
    vals = vals.reshape(sum(((nb, nt) for _ in range(n)), ()))
    return vals.sum(axis=tuple(range(0, 2 * n, 2)))


def _tensor_weights(w: np.ndarray, n: int) -> np.ndarray:
    out = w
    for _ in range(n - 1):
        out = np.multiply.outer(out, w)
    return out.reshape(-1)


def _delta_schur_inner(bw: np.ndarray, t: np.ndarray, lam: Partition) -> complex:
    """sum over the tensor grid t^n of bw * conj(Delta S_lambda).

    Delta S_lambda = alpha A_{lambda + delta} / (i^q sqrt(n!)) and both factors
    separate in the coordinates, so each permutation term is a contraction of
    ``bw`` with n one-dimensional exponentials.
    """
    n = bw.ndim
    mu = np.asarray(lam.parts, dtype=float) + np.arange(n - 1, -1, -1) - 0.5 * (n - 1)
    waves = np.exp(-1j * np.multiply.outer(mu, t))
    total = 0.0j
    for perm, sign in zip(*permutations_with_sign(n)):
        acc = bw
        for k in range(n):
            acc = np.tensordot(acc, waves[perm[k]], axes=([0], [0]))
        total += sign * acc
    q = n * (n - 1) // 2
    return complex(total / np.conj((1j) ** q * math.sqrt(math.factorial(n))))


def decompose(f: Union[RadialFunctionGrid, AnalyticProfile], phi_star: ScalingFunction,
              levels: Sequence[int], lam_max: int = 6, order: Optional[int] = None,
              c_h: Optional[float] = None, strict: bool = False, tail_tol: float = TAIL_WARN) -> CoefficientTree:
    """Coefficient tree of f against the orthonormal scaling function ``phi_star``.

    ``f`` is either space samples (transformed on the fly) or a frequency
    profile H f. ``levels`` is an inclusive range (j_min, j_max) or an explicit
    list. With ``strict`` a relative truncation tail above ``tail_tol`` raises.
    """
    n = phi_star.n
    levels = tuple(levels)
    if len(levels) == 2 and levels[0] <= levels[1]:
        levels = tuple(range(levels[0], levels[1] + 1))
    order = order or 2 * DEFAULT_ORDER.get(n, 12)
    parts = tuple(partitions(n, lam_max))
    if isinstance(f, RadialFunctionGrid):
        top = max_resolved_level(f.grid, phi_star)
        if max(levels) > top:
            raise ValueError(f"level {max(levels)} exceeds the grid resolution (max level {top})")
        norm_sq = f.norm() ** 2
    else:
        norm_sq = frequency_norm(f, order) ** 2
    fact = math.factorial(n)
    coeffs = np.zeros((len(levels), len(parts)), dtype=complex)
    energies = np.zeros(len(levels))
    for k, j in enumerate(levels):
        breaks = list(phi_star.breakpoints)
        if isinstance(f, AnalyticProfile) and f.support_radius is not None:
            edge = f.support_radius * 2.0 ** (-j)
            breaks += [s * edge + 2 * np.pi * l for s in (-1, 1) for l in range(-8, 9)]
        t, w = panel_rule(-np.pi, np.pi, breaks, order)
        b = _level_B(f, phi_star, j, t, c_h).reshape(-1)
        wts = _tensor_weights(w, n)
        kfac = 2.0 ** (j * n * n / 2) / fact
        bw = (b * wts).reshape((len(t),) * n)
        for i, lam in enumerate(parts):
            coeffs[k, i] = kfac * _delta_schur_inner(bw, t, lam) / math.sqrt(torus_volume(n))
        energies[k] = kfac**2 * float(np.sum(np.abs(b) ** 2 * wts))
    tree = CoefficientTree(levels, parts, coeffs, energies, norm_sq)
    if strict:
        for j in levels:
            if tree.tail(j) > tail_tol * max(norm_sq, np.finfo(float).tiny):
                raise TruncationTooSmall(f"level {j}: truncation tail {tree.tail(j):.2e} exceeds tolerance")
    return tree
