"""HCIZ Bessel function, normalized Schur polynomials and Haar sampling.

The alternating sums behind both J(x, z) and s_lambda lose accuracy when
coordinates nearly coincide. Below ``DEGENERACY_GAP`` the evaluation switches
to divided differences: bivariate ones of exp(x z) via the Opitz matrix
exponential for J, and complete homogeneous polynomials for s_lambda.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np
import scipy.linalg

from .weyl_core import (
    RootData,
    alternant,
    delta_over_pi,
    permutations_with_sign,
    superfactorial,
    vandermonde,
)

__all__ = [
    "DEGENERACY_GAP",
    "Partition",
    "partitions",
    "bessel_J",
    "schur_s",
    "schur_S",
    "m_lambda",
    "bessel_schur_residual",
    "haar_unitary",
    "mc_chunks",
    "bessel_J_montecarlo",
]

DEGENERACY_GAP = 1e-4
# relative cancellation error tolerated in the signed sums before falling back
CANCELLATION_TOL = 1e-12
MC_CHUNK = 50_000


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of nonnegative integers of fixed length n."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise ValueError("partition parts must be nonnegative")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("partition parts must be weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def shifted(self) -> np.ndarray:
        """lambda + rho, always a regular chamber point."""
        return np.asarray(self.parts, dtype=float) + RootData(self.n).rho

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def _as_partition(lam, n=None) -> Partition:
    if isinstance(lam, Partition):
        p = lam
    else:
        p = Partition(tuple(lam))
    if n is not None and p.n != n:
        raise ValueError(f"partition {p} has length {p.n}, expected {n}")
    return p


def partitions(n: int, max_size: int) -> List[Partition]:
    """All partitions with at most n parts and |lambda|_1 <= max_size, graded by size."""

    def gen(k, remaining, cap) -> Iterator[Tuple[int, ...]]:
        if k == 0:
            yield ()
            return
        for first in range(min(cap, remaining), -1, -1):
            for rest in gen(k - 1, remaining - first, first):
                yield (first,) + rest

    out = [Partition(p) for p in gen(n, max_size, max_size)]
    out.sort(key=lambda p: (p.size, tuple(-v for v in p.parts)))
    return out


def _min_gap(v) -> np.ndarray:
    n = v.shape[-1]
    gaps = [np.abs(v[..., i] - v[..., j]) for i in range(n) for j in range(i + 1, n)]
    return np.min(np.stack(gaps, axis=-1), axis=-1)


def _opitz(points) -> np.ndarray:
    """Upper bidiagonal matrix whose analytic functions hold divided differences."""
    points = np.asarray(points)
    m = points.shape[-1]
    mat = np.zeros(points.shape[:-1] + (m, m), dtype=complex)
    idx = np.arange(m)
    mat[..., idx, idx] = points
    mat[..., idx[:-1], idx[1:]] = 1.0
    return mat


def _bessel_confluent(x, z) -> np.ndarray:
    """J via det of bivariate divided differences of exp(x z).

    exp(X kron Z) carries e^{xz}[x_1..x_i; z_1..z_j] in row 0, column i*n+j.
    """
    n = x.shape[-1]
    big = np.einsum("...ab,...cd->...acbd", _opitz(x), _opitz(z))
    big = big.reshape(x.shape[:-1] + (n * n, n * n))
    e = scipy.linalg.expm(big)
    dd = e[..., 0, :].reshape(x.shape[:-1] + (n, n))
    return superfactorial(n) * np.linalg.det(dd)


def bessel_J(x, z) -> np.ndarray:
    """J(x, z) = integral over U(n) of exp(tr(u x u^* z)), by the HCIZ formula.

    ``x`` is real, ``z`` complex; both broadcast over leading axes. Points
    with a coordinate gap below ``DEGENERACY_GAP`` in either argument go
    through the confluent evaluation, so the result is continuous.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=complex)
    x, z = np.broadcast_arrays(x, z)
    n = x.shape[-1]
    shape = x.shape[:-1]
    x, z = x.reshape(-1, n), z.reshape(-1, n)
    out = np.empty(x.shape[0], dtype=complex)
    degenerate = (_min_gap(x) < DEGENERACY_GAP) | (_min_gap(z) < DEGENERACY_GAP)
    regular = ~degenerate
    if np.any(regular):
        xr, zr = x[regular], z[regular]
        perms, signs = permutations_with_sign(n)
        total = np.zeros(xr.shape[0], dtype=complex)
        comp = np.zeros_like(total)
        mass = np.zeros(xr.shape[0])
        for p, s in zip(perms, signs):
            term = s * np.exp((xr[:, p] * zr).sum(axis=-1))
            mass += np.abs(term)
            yv = term - comp
            t = total + yv
            comp = (t - total) - yv
            total = t
        val = superfactorial(n) * total / (vandermonde(xr) * vandermonde(zr))
        # several moderately small gaps cancel just as badly as one tiny gap
        err = np.finfo(float).eps * superfactorial(n) * mass / np.abs(vandermonde(xr) * vandermonde(zr))
        lossy = err > CANCELLATION_TOL * np.maximum(1.0, np.abs(val))
        out[regular] = val
        degenerate[regular] = lossy
    if np.any(degenerate):
        out[degenerate] = _bessel_confluent(x[degenerate], z[degenerate])
    return out.reshape(shape)


def _complete_homogeneous(u, max_degree) -> np.ndarray:
    """h[..., k, m] = h_m(u_1..u_{k+1}) for m <= max_degree, m < 0 mapped to 0."""
    n = u.shape[-1]
    h = np.zeros(u.shape[:-1] + (n, max_degree + 1), dtype=complex)
    h[..., 0, :] = u[..., 0, None] ** np.arange(max_degree + 1)
    for k in range(1, n):
        h[..., k, 0] = 1.0
        for m in range(1, max_degree + 1):
            h[..., k, m] = h[..., k - 1, m] + u[..., k] * h[..., k, m - 1]
    return h


def _schur_confluent(mu, x) -> np.ndarray:
    """s_lambda via divided differences of monomials, u^m[u_1..u_k] = h_{m-k+1}(u_1..u_k)."""
    n = x.shape[-1]
    u = np.exp(1j * x)
    delta = np.arange(n - 1, -1, -1)
    top = int(max(mu.max(), delta.max()))
    h = _complete_homogeneous(u, top)

    def dd_matrix(exponents):
        mat = np.zeros(x.shape[:-1] + (n, n), dtype=complex)
        for j, e in enumerate(exponents):
            for k in range(n):
                deg = int(e) - k
                if deg >= 0:
                    mat[..., j, k] = h[..., k, deg]
        return mat

    return np.linalg.det(dd_matrix(mu)) / np.linalg.det(dd_matrix(delta))


def schur_s(lam, x) -> np.ndarray:
    """Schur polynomial s_lambda(e^{ix}) = A_{lambda+delta}(e^{ix}) / A_delta(e^{ix})."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    lam = _as_partition(lam, n)
    mu = np.asarray(lam.parts, dtype=float) + np.arange(n - 1, -1, -1)
    shape = x.shape[:-1]
    x = x.reshape(-1, n)
    u = np.exp(1j * x)
    out = np.empty(x.shape[0], dtype=complex)
    degenerate = _min_gap(u) < DEGENERACY_GAP
    regular = ~degenerate
    if np.any(regular):
        xr = x[regular]
        denom = alternant(np.arange(n - 1, -1, -1), xr)
        out[regular] = alternant(mu, xr) / denom
        # each signed sum has n! unimodular terms
        err = np.finfo(float).eps * math.factorial(n) / np.abs(denom)
        degenerate[regular] = err > CANCELLATION_TOL * np.maximum(1.0, np.abs(out[regular]))
    if np.any(degenerate):
        out[degenerate] = _schur_confluent(mu, x[degenerate])
    return out.reshape(shape)


def schur_S(lam, x) -> np.ndarray:
    """Orthonormal Schur function S_lambda = s_lambda / (i^q sqrt(n!))."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    q = n * (n - 1) // 2
    return schur_s(lam, x) / ((1j) ** q * math.sqrt(math.factorial(n)))


def m_lambda(lam) -> float:
    """M_lambda = pi(lambda + rho) / (sqrt(n!) prod_{k<n} k!)."""
    lam = _as_partition(lam)
    n = lam.n
    return float(vandermonde(lam.shifted())) / (math.sqrt(math.factorial(n)) * superfactorial(n))


def bessel_schur_residual(lam, x) -> float:
    """|S_lambda(x) - M_lambda pi(x)/Delta(x) J(x, i(lambda+rho))| at one point ``x``.

    pi/Delta is taken in its continuous form, so points near a wall
    x_i = x_j are fine; a vanishing Delta with pi != 0 raises.
    """
    x = np.asarray(x, dtype=float)
    lam = _as_partition(lam, x.shape[-1])
    ratio = delta_over_pi(x)
    if np.any(np.abs(ratio) < 1e-12):
        raise ValueError("Delta(x) vanishes away from the walls; pi/Delta is unbounded")
    lhs = schur_S(lam, x)
    rhs = m_lambda(lam) / ratio * bessel_J(x, 1j * lam.shifted())
    return float(np.max(np.abs(lhs - rhs)))


def haar_unitary(n: int, size, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitaries: complex Ginibre, QR, then fix the phases of diag(R)."""
    size = (size,) if np.isscalar(size) else tuple(size)
    z = (rng.standard_normal(size + (n, n)) + 1j * rng.standard_normal(size + (n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    return q * ph[..., None, :]


def mc_chunks(samples: int, seed: int, chunk: int = MC_CHUNK):
    """Yield ``(size, rng)`` pairs; the chunking depends only on (samples, seed, chunk)."""
    if samples <= 0:
        raise ValueError("sample count must be positive")
    count = -(-samples // chunk)
    children = np.random.SeedSequence(seed).spawn(count)
    for k, child in enumerate(children):
        size = min(chunk, samples - k * chunk)
        yield size, np.random.default_rng(child)


def bessel_J_montecarlo(x, z, samples: int, seed: int) -> Tuple[complex, float]:
    """Haar average of exp(tr(u x u^* z)) with its standard error.

    Chunk partial sums are combined sequentially in chunk order.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=complex)
    n = x.shape[-1]
    s1 = 0.0 + 0.0j
    s2 = 0.0
    for size, rng in mc_chunks(samples, seed):
        u = haar_unitary(n, size, rng)
        w = np.abs(u) ** 2  # tr(u x u^* z) = sum_ij |u_ij|^2 z_i x_j
        vals = np.exp(np.einsum("sij,i,j->s", w, z, x))
        s1 += vals.sum()
        s2 += float((np.abs(vals) ** 2).sum())
    mean = s1 / samples
    var = max(s2 / samples - abs(mean) ** 2, 0.0)
    return complex(mean), math.sqrt(var / samples)
