"""Periodic symmetric symbols and lattice periodization.

Torus integrals use the normalized Haar measure d xi / (2 pi)^n on
T^n = R^n / I, the measure under which the S_lambda are orthonormal. Frequency
integrals over R^n are Lebesgue; ``torus_volume`` converts between the two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..weyl_core import LatticePair

__all__ = [
    "SlowDecayError",
    "R_LATTICE",
    "LATTICE_TAIL_TOL",
    "torus_volume",
    "reduce_mod",
    "torus_nodes",
    "lattice_offsets",
    "lattice_sum",
    "PeriodicSymmetricFunction",
]

R_LATTICE = 16 * np.pi
LATTICE_TAIL_TOL = 1e-8


class SlowDecayError(ValueError):
    """The lattice sum has too much mass in its outermost shell."""


def torus_volume(n: int) -> float:
    return (2 * np.pi) ** n


def reduce_mod(xi, period: float = 2 * np.pi, center: bool = False) -> np.ndarray:
    """Reduce coordinates to [0, period), or to [-period/2, period/2) when ``center``."""
    xi = np.asarray(xi, dtype=float)
    if center:
        return np.mod(xi + period / 2, period) - period / 2
    return np.mod(xi, period)


def torus_nodes(n: int, m: int, center: bool = False) -> np.ndarray:
    """Midpoint nodes of an m^n grid on the torus, flattened to (m^n, n).

    The midpoint shift keeps nodes off the cube faces where indicator symbols jump.
    """
    t = 2 * np.pi * (np.arange(m) + 0.5) / m
    if center:
        t = t - np.pi
    axes = np.meshgrid(*([t] * n), indexing="ij")
    return np.stack(axes, axis=-1).reshape(-1, n)


def lattice_offsets(n: int, radius: float) -> np.ndarray:
    """Points q of I = 2 pi Z^n with |q|_inf <= radius + 2 pi."""
    k = int(math.ceil(radius / (2 * np.pi))) + 1
    return LatticePair(n).lattice_points(k)


def lattice_sum(func: Callable, xi, radius: float = R_LATTICE, tail_tol: float = LATTICE_TAIL_TOL,
                support_radius: Optional[float] = None) -> np.ndarray:
    """sum_q func(xi + q) over q in I with |xi + q|_inf <= radius.

    ``func`` returns nonnegative values (already squared). Without a support
    radius the outermost shell radius - 2 pi < |xi + q|_inf <= radius is
    compared against the total; ``SlowDecayError`` if it exceeds ``tail_tol``.
    """
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    flat = xi.reshape(-1, n)
    if support_radius is not None:
        radius = min(radius, support_radius)
    total = np.zeros(flat.shape[0])
    shell = np.zeros(flat.shape[0])
    for q in lattice_offsets(n, radius):
        pts = flat + q
        size = np.max(np.abs(pts), axis=-1)
        inside = size <= radius
        if not np.any(inside):
            continue
        vals = np.zeros(flat.shape[0])
        vals[inside] = np.asarray(func(pts[inside]), dtype=float)
        total += vals
        if support_radius is None:
            shell += np.where(size > radius - 2 * np.pi, vals, 0.0)
    if support_radius is None:
        scale = np.maximum(total, np.finfo(float).tiny)
        worst = float(np.max(np.where(total > 0, shell / scale, 0.0), initial=0.0))
        if worst > tail_tol:
            raise SlowDecayError(f"lattice tail fraction {worst:.2e} exceeds {tail_tol:.1e}")
    return total.reshape(xi.shape[:-1])


@dataclass(frozen=True)
class PeriodicSymmetricFunction:
    """An S_n-invariant, I-periodic symbol, given by a callable and/or torus samples.

    Samples live on the midpoint grid of [0, 2 pi)^n with ``m`` nodes per axis.
    Evaluation uses the callable when present and falls back to the sample of
    the grid cell containing the reduced point.
    """

    n: int
    func: Optional[Callable] = field(default=None, compare=False)
    m: Optional[int] = None
    samples: Optional[np.ndarray] = field(default=None, compare=False)
    name: str = "symbol"

    def __post_init__(self):
        if self.func is None and self.samples is None:
            raise ValueError("need a callable or samples")
        if self.samples is not None:
            s = np.asarray(self.samples, dtype=complex)
            if self.m is None or s.shape != (self.m,) * self.n:
                raise ValueError("samples must have shape (m,)*n")
            object.__setattr__(self, "samples", s)

    @classmethod
    def from_callable(cls, func: Callable, n: int, m: Optional[int] = None, name: str = "symbol"):
        samples = None
        if m is not None:
            samples = np.asarray(func(torus_nodes(n, m)), dtype=complex).reshape((m,) * n)
        return cls(n, func, m, samples, name)

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(xi), dtype=complex)
        idx = np.floor(reduce_mod(xi) / (2 * np.pi) * self.m).astype(np.intp)
        idx = np.clip(idx, 0, self.m - 1)
        return self.samples[tuple(np.moveaxis(idx, -1, 0))]

    def sampled(self, m: int) -> "PeriodicSymmetricFunction":
        """A sample-only copy on an m-node grid."""
        vals = np.asarray(self(torus_nodes(self.n, m)), dtype=complex).reshape((m,) * self.n)
        return PeriodicSymmetricFunction(self.n, None, m, vals, self.name)

    def symmetry_defect(self, points) -> float:
        """max |f(w xi) - f(xi)| over the transpositions of adjacent coordinates."""
        points = np.asarray(points, dtype=float)
        base = self(points)
        worst = 0.0
        for k in range(self.n - 1):
            p = points.copy()
            p[..., [k, k + 1]] = p[..., [k + 1, k]]
            worst = max(worst, float(np.max(np.abs(self(p) - base), initial=0.0)))
        return worst

    def periodicity_defect(self, points) -> float:
        """max |f(xi + 2 pi e_k) - f(xi)| over coordinate directions k."""
        points = np.asarray(points, dtype=float)
        base = self(points)
        worst = 0.0
        for k in range(self.n):
            p = points.copy()
            p[..., k] += 2 * np.pi
            worst = max(worst, float(np.max(np.abs(self(p) - base), initial=0.0)))
        return worst
