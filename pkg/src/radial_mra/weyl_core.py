"""Root system A_{n-1}: chamber geometry, lattices and alternating kernels.

Points of R^n are stored along the last axis of an array, so every function
here accepts a single vector of shape ``(n,)`` or a stack of shape
``(..., n)``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

__all__ = [
    "MAX_PERMUTATION_RANK",
    "RootData",
    "LatticePair",
    "ChamberPoint",
    "permutations_with_sign",
    "vandermonde",
    "omega",
    "weyl_denominator",
    "phase_alpha",
    "alternant",
    "delta_over_pi",
    "project_trace",
    "simple_root_coords",
    "from_simple_root_coords",
    "orbit_hull_contains",
    "dual_cone_contains",
    "superfactorial",
]

MAX_PERMUTATION_RANK = 6
HULL_TOL = 1e-10
TRACE_TOL = 1e-9


def superfactorial(n: int) -> int:
    """Return prod_{k=1}^{n-1} k!."""
    return math.prod(math.factorial(k) for k in range(1, n))


@functools.lru_cache(maxsize=None)
def permutations_with_sign(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """All permutations of ``range(n)`` with their signs, via Heap's algorithm.

    Consecutive permutations differ by one transposition, so the sign simply
    alternates. Returns ``(perms, signs)`` with ``perms`` of shape ``(n!, n)``.
    """
    if n < 1:
        raise ValueError("rank must be positive")
    if n > MAX_PERMUTATION_RANK:
        raise ValueError(f"permutation sums are capped at n <= {MAX_PERMUTATION_RANK}")
    a = list(range(n))
    c = [0] * n
    perms = [tuple(a)]
    signs = [1]
    sign = 1
    i = 1
    while i < n:
        if c[i] < i:
            if i % 2 == 0:
                a[0], a[i] = a[i], a[0]
            else:
                a[c[i]], a[i] = a[i], a[c[i]]
            sign = -sign
            perms.append(tuple(a))
            signs.append(sign)
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1
    p = np.array(perms, dtype=np.intp)
    s = np.array(signs, dtype=np.int8)
    p.setflags(write=False)
    s.setflags(write=False)
    return p, s


def _pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def vandermonde(x) -> np.ndarray:
    """pi(x) = prod_{i<j} (x_i - x_j), broadcast over leading axes."""
    x = np.asarray(x)
    n = x.shape[-1]
    out = np.ones(x.shape[:-1], dtype=np.result_type(x.dtype, float))
    for i, j in _pairs(n):
        out = out * (x[..., i] - x[..., j])
    return out


def omega(x) -> np.ndarray:
    """Weight pi(x)^2 of the chamber measure."""
    v = vandermonde(x)
    return (v * np.conj(v)).real if np.iscomplexobj(v) else v * v


def weyl_denominator(x) -> np.ndarray:
    """Delta(x) = prod_{i<j} (e^{i(x_i-x_j)/2} - e^{-i(x_i-x_j)/2}).

    Each factor equals ``2i sin((x_i - x_j)/2)``.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    out = np.ones(x.shape[:-1], dtype=complex)
    for i, j in _pairs(n):
        out = out * (2j * np.sin((x[..., i] - x[..., j]) / 2))
    return out


def phase_alpha(x) -> np.ndarray:
    """alpha(x) = exp(-i (n-1)/2 <x, 1>), the phase with Delta = alpha * A_delta."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return np.exp(-0.5j * (n - 1) * x.sum(axis=-1))


def alternant(mu, x) -> np.ndarray:
    """A_mu(e^{ix}) = det(e^{i mu_j x_k}) for an exponent vector ``mu``."""
    x = np.asarray(x, dtype=float)
    mu = np.asarray(mu, dtype=float)
    n = x.shape[-1]
    perms, signs = permutations_with_sign(n)
    total = np.zeros(x.shape[:-1], dtype=complex)
    comp = np.zeros_like(total)
    for p, s in zip(perms, signs):
        term = s * np.exp(1j * (x[..., p] * mu).sum(axis=-1))
        # Kahan step; the signed exponential sum is the dominant error source
        yv = term - comp
        t = total + yv
        comp = (t - total) - yv
        total = t
    return total


def delta_over_pi(x) -> np.ndarray:
    """Delta(x)/pi(x), continued across the walls x_i = x_j.

    Each factor is ``2i sin(d/2)/d = i * sinc(d / 2pi)``, finite everywhere.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    out = np.ones(x.shape[:-1], dtype=complex)
    for i, j in _pairs(n):
        out = out * (1j * np.sinc((x[..., i] - x[..., j]) / (2 * np.pi)))
    return out


def project_trace(x) -> Tuple[np.ndarray, np.ndarray]:
    """Split ``x`` into its trace-zero part and its component along (1,...,1)."""
    x = np.asarray(x, dtype=float)
    mean = x.mean(axis=-1, keepdims=True)
    x1 = np.broadcast_to(mean, x.shape).copy()
    return x - x1, x1


def simple_root_coords(v) -> np.ndarray:
    """Coordinates c_1..c_{n-1} of a trace-zero ``v`` in the simple roots.

    With alpha_j = e_j - e_{j+1} one has c_j = v_1 + ... + v_j.
    """
    v = np.asarray(v, dtype=float)
    return np.cumsum(v, axis=-1)[..., :-1]


def from_simple_root_coords(c) -> np.ndarray:
    """Inverse of :func:`simple_root_coords`."""
    c = np.asarray(c, dtype=float)
    zero = np.zeros(c.shape[:-1] + (1,))
    padded = np.concatenate([zero, c, zero], axis=-1)
    return np.diff(padded, axis=-1)


def orbit_hull_contains(h, x, tol: float = HULL_TOL) -> np.ndarray:
    """Whether ``h`` lies in conv(S_n . x), via majorization.

    ``h`` is in the hull iff the coordinate sums agree and the partial sums
    of the descending sort of ``h`` never exceed those of ``x``.
    """
    h = np.asarray(h, dtype=float)
    x = np.asarray(x, dtype=float)
    hs = -np.sort(-h, axis=-1)
    xs = -np.sort(-x, axis=-1)
    ph = np.cumsum(hs, axis=-1)
    px = np.cumsum(xs, axis=-1)
    scale = 1.0 + np.abs(px).max(axis=-1)
    same_sum = np.abs(ph[..., -1] - px[..., -1]) <= tol * scale
    dominated = np.all(ph[..., :-1] <= px[..., :-1] + tol * scale[..., None], axis=-1)
    return same_sum & dominated


def dual_cone_contains(v, tol: float = HULL_TOL) -> np.ndarray:
    """Whether a trace-zero ``v`` lies in the closed cone spanned by the simple roots."""
    v = np.asarray(v, dtype=float)
    scale = 1.0 + np.abs(v).max(axis=-1)
    if np.any(np.abs(v.sum(axis=-1)) > TRACE_TOL * scale):
        raise ValueError("dual cone membership needs a trace-zero vector")
    c = simple_root_coords(v)
    return np.all(c >= -tol * scale[..., None], axis=-1)


@dataclass(frozen=True)
class RootData:
    """Positive system of A_{n-1} in R^n.

    ``nonsimple_expansion[k]`` holds the simple-root coefficients of the k-th
    non-simple positive root, in the order of ``positive_roots`` with the
    simple ones removed.
    """

    n: int
    positive_roots: np.ndarray = field(init=False, repr=False)
    simple_roots: np.ndarray = field(init=False, repr=False)
    rho: np.ndarray = field(init=False, repr=False)
    delta_vec: np.ndarray = field(init=False, repr=False)
    nonsimple_expansion: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n
        if n < 2:
            raise ValueError("rank must be at least 2")
        eye = np.eye(n)
        pos = np.array([eye[i] - eye[j] for i, j in _pairs(n)])
        simple = np.array([eye[i] - eye[i + 1] for i in range(n - 1)])
        rho = 0.5 * np.arange(n - 1, -n, -2, dtype=float)
        delta = np.arange(n - 1, -1, -1, dtype=float)
        nonsimple = [(i, j) for i, j in _pairs(n) if j > i + 1]
        exp = np.zeros((len(nonsimple), n - 1), dtype=int)
        for k, (i, j) in enumerate(nonsimple):
            exp[k, i:j] = 1
        object.__setattr__(self, "positive_roots", pos)
        object.__setattr__(self, "simple_roots", simple)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "delta_vec", delta)
        object.__setattr__(self, "nonsimple_expansion", exp)

    @property
    def q(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def m(self) -> int:
        """dim Herm(n) + 2|Sigma_+| = 2n^2 - n."""
        return 2 * self.n**2 - self.n

    @property
    def dilation_exponent(self) -> int:
        """Homogeneity degree of omega(x) dx; D_a is unitary with a^{-this/2}."""
        return self.n + 2 * self.q


@dataclass(frozen=True)
class LatticePair:
    """I = 2 pi Z^n inside L = pi Z^n, with coset representatives {0, pi}^n.

    Coset representatives are ordered by the binary expansion of their
    indicator pattern, so index 0 is always the zero vector.
    """

    n: int

    @property
    def coset_bits(self) -> np.ndarray:
        r = 2**self.n
        idx = np.arange(r)
        return ((idx[:, None] >> np.arange(self.n - 1, -1, -1)) & 1).astype(np.intp)

    @property
    def coset_reps(self) -> np.ndarray:
        return np.pi * self.coset_bits

    @property
    def r(self) -> int:
        return 2**self.n

    @property
    def fundamental_domain(self) -> Tuple[float, float]:
        return 0.0, 2 * np.pi

    @property
    def half_domain(self) -> Tuple[float, float]:
        return 0.0, np.pi

    def coset_index(self, bits) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.intp)
        weights = 1 << np.arange(self.n - 1, -1, -1)
        return (bits * weights).sum(axis=-1)

    def lattice_points(self, radius: int) -> np.ndarray:
        """Points 2 pi l of I with |l|_inf <= radius."""
        rng = np.arange(-radius, radius + 1)
        grids = np.meshgrid(*([rng] * self.n), indexing="ij")
        return 2 * np.pi * np.stack(grids, axis=-1).reshape(-1, self.n)


@dataclass(frozen=True)
class ChamberPoint:
    """An ordered spectrum x_1 >= ... >= x_n."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.ndim != 1:
            raise ValueError("a chamber point is a single vector")
        if np.any(np.diff(c) > 0):
            raise ValueError("chamber coordinates must be weakly decreasing")
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_spectrum(cls, values) -> "ChamberPoint":
        # stable descending sort keeps ties in input order
        v = np.asarray(values, dtype=float)
        order = np.argsort(-v, kind="stable")
        return cls(v[order])

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def is_regular(self, tol: float = 0.0) -> bool:
        return bool(np.all(-np.diff(self.coords) > tol))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)
