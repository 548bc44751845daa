"""Radial Hankel transform on the Weyl chamber.

For a symmetric f the chamber integral against J(x, -iy) omega(x) unfolds to
a Euclidean Fourier integral,

    Hf(y) = c_H prod_{k<n} k! / ((-i)^q pi(y)) * int_{R^n} f(x) pi(x) e^{-i<x,y>} dx,

because f pi is alternating. On a tensor Gauss-Legendre grid over [-R, R]^n
the right side factorizes into one small dense matrix product per axis.
Grid nodes with a repeated coordinate have pi = 0; they carry no weight in
any chamber integral and their transform values are stored as zero.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .special_functions import bessel_J, m_lambda
from .weyl_core import RootData, delta_over_pi, superfactorial, vandermonde

__all__ = [
    "TruncationError",
    "TensorGrid",
    "RadialFunctionGrid",
    "FrequencyProfile",
    "AnalyticProfile",
    "DEFAULT_GRIDS",
    "default_grid",
    "calibrate_constant",
    "closed_form_constant",
    "hankel_forward",
    "hankel_inverse",
    "hankel_pi_tensor",
    "dilate",
    "freq_translate",
    "lambda_multiplier",
    "freq_lambda_translate",
]

# (nodes per axis, cube half-width) per rank
DEFAULT_GRIDS = {2: (96, 9.0), 3: (72, 8.5)}
TAIL_TOL = 1e-6


class TruncationError(ValueError):
    """The function carries too much mass near the edge of the truncation cube."""


@functools.lru_cache(maxsize=None)
def _leggauss(m: int):
    g, w = np.polynomial.legendre.leggauss(m)
    g.setflags(write=False)
    w.setflags(write=False)
    return g, w


@dataclass(frozen=True)
class TensorGrid:
    """Tensor Gauss-Legendre rule on [-R, R]^n, shared by space and frequency side."""

    n: int
    nodes_per_axis: int
    radius: float

    @property
    def t(self) -> np.ndarray:
        return self.radius * _leggauss(self.nodes_per_axis)[0]

    @property
    def w(self) -> np.ndarray:
        return self.radius * _leggauss(self.nodes_per_axis)[1]

    @property
    def shape(self):
        return (self.nodes_per_axis,) * self.n

    @functools.cached_property
    def points(self) -> np.ndarray:
        axes = np.meshgrid(*([self.t] * self.n), indexing="ij")
        return np.stack(axes, axis=-1)

    @functools.cached_property
    def cube_weights(self) -> np.ndarray:
        out = np.ones(self.shape)
        for k in range(self.n):
            sh = [1] * self.n
            sh[k] = -1
            out = out * self.w.reshape(sh)
        return out

    @functools.cached_property
    def pi(self) -> np.ndarray:
        return vandermonde(self.points)

    @functools.cached_property
    def regular(self) -> np.ndarray:
        """Nodes with pairwise distinct coordinates."""
        return self.pi != 0

    @functools.cached_property
    def chamber(self) -> np.ndarray:
        """Nodes with strictly decreasing coordinates, one per S_n-orbit."""
        return np.all(np.diff(self.points, axis=-1) < 0, axis=-1)

    @functools.cached_property
    def measure(self) -> np.ndarray:
        """Weights of omega(x) dx on the truncated chamber, carried by chamber nodes."""
        return np.where(self.chamber, self.cube_weights * self.pi**2, 0.0)

    def scaled(self, a: float) -> "TensorGrid":
        return replace(self, radius=self.radius * a)

    def sample(self, func: Callable) -> np.ndarray:
        return np.asarray(func(self.points))


def default_grid(n: int) -> TensorGrid:
    if n not in DEFAULT_GRIDS:
        raise ValueError(f"no default grid for rank {n}")
    return TensorGrid(n, *DEFAULT_GRIDS[n])


@dataclass(frozen=True)
class RadialFunctionGrid:
    """Samples of a symmetric function on a tensor grid.

    Values are kept on the whole cube so the transform stays separable; only
    chamber nodes enter norms and inner products.
    """

    grid: TensorGrid
    values: np.ndarray
    domain: str = "space"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise ValueError(f"values of shape {v.shape} do not match grid {self.grid.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, func: Callable, grid: TensorGrid, domain: str = "space"):
        return cls(grid, grid.sample(func), domain)

    @property
    def n(self) -> int:
        return self.grid.n

    def inner(self, other: "RadialFunctionGrid") -> complex:
        if other.grid != self.grid:
            raise ValueError("inner product needs a common grid")
        return complex(np.sum(self.grid.measure * self.values * np.conj(other.values)))

    def norm(self) -> float:
        return float(math.sqrt(np.sum(self.grid.measure * np.abs(self.values) ** 2)))

    def tail_fraction(self, shell: float = 0.9) -> float:
        """Relative L^2 mass outside the inner cube of half-width shell * R."""
        outer = np.max(np.abs(self.grid.points), axis=-1) > shell * self.grid.radius
        total = np.sum(self.grid.measure * np.abs(self.values) ** 2)
        if total == 0:
            return 0.0
        return float(math.sqrt(np.sum((self.grid.measure * np.abs(self.values) ** 2)[outer]) / total))

    def __sub__(self, other):
        if other.grid != self.grid:
            raise ValueError("grids differ")
        return replace(self, values=self.values - other.values)


class FrequencyProfile(RadialFunctionGrid):
    """Samples of a Hankel transform on a frequency grid."""

    def __init__(self, grid, values, domain="frequency"):
        super().__init__(grid, values, "frequency")


@dataclass(frozen=True)
class AnalyticProfile:
    """A frequency profile given by a callable on points of R^n.

    ``support_radius`` bounds |xi|_inf on the support, when the profile is
    compactly supported (None otherwise).
    """

    func: Callable
    n: int
    name: str = "profile"
    support_radius: Optional[float] = None

    def __call__(self, xi) -> np.ndarray:
        return np.asarray(self.func(np.asarray(xi, dtype=float)), dtype=complex)

    def sample(self, grid: TensorGrid) -> FrequencyProfile:
        return FrequencyProfile(grid, self(grid.points))

    def scaled(self, c: complex) -> "AnalyticProfile":
        f = self.func
        return replace(self, func=lambda xi: c * f(xi))


def calibrate_constant(grid: TensorGrid) -> float:
    """c_H fixed by the Gaussian: Hg(0) = g(0) = 1 forces c_H = 1 / int e^{-|x|^2/2} omega."""
    g = np.exp(-0.5 * np.sum(grid.points**2, axis=-1))
    return float(1.0 / np.sum(grid.measure * g))


def closed_form_constant(n: int) -> float:
    """1 / ((2 pi)^{n/2} prod_{k<n} k!), the value the calibration reproduces."""
    return 1.0 / ((2 * np.pi) ** (n / 2) * superfactorial(n))


def _separable(values, t_in, w_in, t_out, sign):
    """sum over the cube of values * w * e^{sign i <x, y>} for y on the output tensor grid."""
    e = np.exp(sign * 1j * np.outer(t_out, t_in)) * w_in[None, :]
    out = values
    for axis in range(values.ndim):
        out = np.moveaxis(np.tensordot(e, out, axes=([1], [axis])), 0, axis)
    return out


def _transform(f: RadialFunctionGrid, out_grid: TensorGrid, sign: int, c_h: Optional[float], tol: float):
    n = f.n
    if f.tail_fraction() > tol:
        raise TruncationError(f"tail mass {f.tail_fraction():.2e} near the cube edge exceeds {tol:.1e}")
    if c_h is None:
        c_h = calibrate_constant(f.grid)
    q = RootData(n).q
    s = _separable(f.values * f.grid.pi, f.grid.t, f.grid.w, out_grid.t, sign)
    pi_out = out_grid.pi
    pref = c_h * superfactorial(n) / ((sign * 1j) ** q)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(out_grid.regular, pref * s / pi_out, 0.0)
    return vals


def hankel_forward(f: RadialFunctionGrid, out_grid: Optional[TensorGrid] = None, c_h: Optional[float] = None,
                   tol: float = TAIL_TOL) -> FrequencyProfile:
    """Hf(y) = c_H int_chamber f(x) J(x, -iy) omega(x) dx on ``out_grid`` (default: input grid)."""
    out_grid = f.grid if out_grid is None else out_grid
    return FrequencyProfile(out_grid, _transform(f, out_grid, -1, c_h, tol))


def hankel_inverse(F: RadialFunctionGrid, out_grid: Optional[TensorGrid] = None, c_h: Optional[float] = None,
                   tol: float = TAIL_TOL) -> RadialFunctionGrid:
    """Adjoint transform with kernel J(x, iy); inverse of :func:`hankel_forward` by Plancherel."""
    out_grid = F.grid if out_grid is None else out_grid
    return RadialFunctionGrid(out_grid, _transform(F, out_grid, 1, c_h, tol), "space")


def hankel_pi_tensor(f: RadialFunctionGrid, axis, c_h: Optional[float] = None, tol: float = TAIL_TOL) -> np.ndarray:
    """pi(y) Hf(y) on the tensor grid axis^n.

    The product is the plain Fourier sum without the division by pi(y), so it
    stays accurate at and near the walls y_i = y_j.
    """
    if f.tail_fraction() > tol:
        raise TruncationError(f"tail mass {f.tail_fraction():.2e} near the cube edge exceeds {tol:.1e}")
    if c_h is None:
        c_h = calibrate_constant(f.grid)
    n = f.n
    q = RootData(n).q
    s = _separable(f.values * f.grid.pi, f.grid.t, f.grid.w, np.asarray(axis, dtype=float), -1)
    return c_h * superfactorial(n) / ((-1j) ** q) * s


def dilate(f: RadialFunctionGrid, a: float, func: Optional[Callable] = None) -> RadialFunctionGrid:
    """D_a f(x) = a^{-n^2/2} f(x / a).

    Without ``func`` the nodes are rescaled by a, which keeps the discrete norm
    exactly. With ``func`` (the function behind the samples) the result is
    resampled on the original grid.
    """
    if a <= 0:
        raise ValueError("dilation needs a > 0")
    n = f.n
    scale = a ** (-(n * n) / 2)
    if func is None:
        return replace(f, grid=f.grid.scaled(a), values=scale * f.values)
    return replace(f, values=scale * np.asarray(func(f.grid.points / a)))


def freq_translate(y, F: RadialFunctionGrid) -> RadialFunctionGrid:
    """Multiply by J(xi, iy): the frequency-side action of T_y."""
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        return F
    pts = F.grid.points.reshape(-1, F.n)
    mult = bessel_J(pts, 1j * y[None, :]).reshape(F.grid.shape)
    return replace(F, values=F.values * mult)


def lambda_multiplier(lam, xi) -> np.ndarray:
    """Delta(xi) S_lambda(xi) / pi(xi), the symbol of M_lambda T_{lambda+rho}."""
    from .special_functions import schur_S

    xi = np.asarray(xi, dtype=float)
    return delta_over_pi(xi) * schur_S(lam, xi)


def freq_lambda_translate(lam, F: RadialFunctionGrid) -> RadialFunctionGrid:
    pts = F.grid.points.reshape(-1, F.n)
    mult = lambda_multiplier(lam, pts).reshape(F.grid.shape)
    return replace(F, values=F.values * mult)
