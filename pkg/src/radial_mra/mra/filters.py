"""Filter functions, the QMF identity and unitary wavelet completion."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from ..hankel import AnalyticProfile
from ..weyl_core import LatticePair, phase_alpha
from .periodic import PeriodicSymmetricFunction, reduce_mod, torus_nodes
from .scaling import ScalingFunction, cross_periodization

__all__ = [
    "QMFError",
    "POLE_TOL",
    "FilterFunction",
    "delta_ratio",
    "inverse_delta_ratio",
    "near_pole",
    "qmf_check",
    "householder_completion",
    "WaveletFamily",
    "wavelet_matrix",
    "unitarity_deviation",
    "wavelet_construct",
    "cross_periodization_matrix",
]

POLE_TOL = 1e-8


class QMFError(ValueError):
    """The filter does not satisfy sum_p |G(xi + p)|^2 = 1."""


def alpha_phase(xi) -> np.ndarray:
    """Argument of alpha(xi) = exp(-i (n-1)/2 <xi, 1>)."""
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    return -0.5 * (n - 1) * xi.sum(axis=-1)


@dataclass(frozen=True)
class FilterFunction:
    """G = modulus * exp(i phase), with |G| I-periodic and S_n-invariant.

    Keeping the modulus separate lets indicator filters pass the QMF identity
    in exact arithmetic.
    """

    n: int
    modulus: Callable
    phase: Callable = field(default=alpha_phase)
    name: str = "G"

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return np.asarray(self.modulus(xi)) * np.exp(1j * np.asarray(self.phase(xi)))

    def scaled(self, c: float) -> "FilterFunction":
        mod = self.modulus
        return FilterFunction(self.n, lambda xi: c * np.asarray(mod(xi)), self.phase, self.name)

    def delta_ratio(self, xi) -> np.ndarray:
        return delta_ratio(xi)


def inverse_delta_ratio(xi) -> np.ndarray:
    """1 / delta(x) = Delta(2x) / Delta(x) = prod_{i<j} 2 cos((x_i - x_j) / 2), pole-free."""
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    out = np.ones(xi.shape[:-1])
    for i in range(n):
        for j in range(i + 1, n):
            out = out * 2 * np.cos(0.5 * (xi[..., i] - xi[..., j]))
    return out


def delta_ratio(xi) -> np.ndarray:
    """delta(x) = Delta(x) / Delta(2x), continued across the zeros of Delta."""
    with np.errstate(divide="ignore"):
        return 1.0 / inverse_delta_ratio(xi)


def near_pole(xi, tol: float = POLE_TOL) -> np.ndarray:
    """True where some x_i - x_j lies within tol of pi Z (zeros of Delta(2.) and Delta)."""
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    out = np.zeros(xi.shape[:-1], dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            d = reduce_mod(xi[..., i] - xi[..., j], np.pi, center=True)
            out |= np.abs(d) < tol
    return out


def qmf_check(G: FilterFunction, points=None, m: int = 64) -> float:
    """sup over grid xi of |sum_{p in L/I} |G(xi + p)|^2 - 1|."""
    lattice = LatticePair(G.n)
    pts = torus_nodes(G.n, m) if points is None else np.asarray(points, dtype=float).reshape(-1, G.n)
    total = np.zeros(pts.shape[0])
    for p in lattice.coset_reps:
        total = total + np.abs(np.asarray(G.modulus(pts + p))) ** 2
    return float(np.max(np.abs(total - 1.0)))


def householder_completion(v: np.ndarray) -> np.ndarray:
    """Unitary matrices whose first row is the unit vector v, for a batch (N, r).

    A Householder reflection H sends e_0 to w = conj(theta) v with
    theta = v_0 / |v_0|; the result is H^T with its first row multiplied by
    theta. Rows with w = e_0 complete by the identity.
    """
    v = np.asarray(v, dtype=complex)
    nb, r = v.shape
    a = np.abs(v[:, 0])
    theta = np.where(a > 0, v[:, 0] / np.where(a > 0, a, 1.0), 1.0)
    w = np.conj(theta)[:, None] * v
    u = -w
    # 1 - w_0 = sum_{k>0} |w_k|^2 / (1 + w_0) avoids cancellation near the tie w = e_0
    rest = np.sum(np.abs(w[:, 1:]) ** 2, axis=1)
    u[:, 0] = rest / (1.0 + w[:, 0].real)
    nu = np.sum(np.abs(u) ** 2, axis=1)
    eye = np.broadcast_to(np.eye(r, dtype=complex), (nb, r, r))
    tie = rest == 0
    scale = np.where(tie, 0.0, 2.0 / np.where(tie, 1.0, nu))
    h = eye - scale[:, None, None] * u[:, :, None] * np.conj(u)[:, None, :]
    out = np.swapaxes(h, 1, 2).copy()
    out[:, 0, :] *= theta[:, None]
    return out


def _canonical(xi, lattice: LatticePair):
    """Split xi mod 2 pi into a sorted base point in [0, pi)^n and coset bits.

    Sorting makes the completion S_n-equivariant: permuted inputs reach the
    same base point and the same permuted bits.
    """
    z = reduce_mod(xi)
    bits = (z >= np.pi).astype(np.intp)
    base = z - np.pi * bits
    order = np.argsort(-base, axis=-1, kind="stable")
    base = np.take_along_axis(base, order, axis=-1)
    bits = np.take_along_axis(bits, order, axis=-1)
    return base, lattice.coset_index(bits)


def completion_symbols(eta0: Callable, n: int) -> Callable:
    """eta(xi) -> (..., r) values eta^i(xi) from the Householder completion of eta^0."""
    lattice = LatticePair(n)

    def eta(xi):
        xi = np.asarray(xi, dtype=float)
        shape = xi.shape[:-1]
        flat = xi.reshape(-1, n)
        base, col = _canonical(flat, lattice)
        row0 = np.stack([np.asarray(eta0(base + p), dtype=complex) for p in lattice.coset_reps], axis=-1)
        u = householder_completion(row0)
        vals = u[np.arange(flat.shape[0]), :, col]
        return vals.reshape(shape + (lattice.r,))

    return eta


@dataclass(frozen=True)
class WaveletFamily:
    """Scaling function, filter and r - 1 = 2^n - 1 wavelets.

    ``rows[i](xi)`` returns beta^i(xi) delta(xi), free of the poles of delta;
    ``betas[i]`` are the symbols themselves (beta^0 = gamma).
    """

    phi: ScalingFunction
    G: FilterFunction
    rows: List[Callable]
    profiles: List[AnalyticProfile]
    name: str = "family"

    @property
    def n(self) -> int:
        return self.phi.n

    @property
    def r(self) -> int:
        return len(self.rows)

    @property
    def count(self) -> int:
        return len(self.profiles)

    @property
    def betas(self) -> List[PeriodicSymmetricFunction]:
        out = []
        for i, row in enumerate(self.rows):
            out.append(PeriodicSymmetricFunction(self.n, _divide_delta(row), name=f"beta{i}"))
        return out


def _divide_delta(row):
    def beta(xi):
        xi = np.asarray(xi, dtype=float)
        return row(xi) * inverse_delta_ratio(xi)

    return beta


def wavelet_matrix(betas, xi, pole_tol: float = POLE_TOL):
    """Matrices (beta^i(xi + p) delta(xi + p))_{i, p} for xi of shape (N, n).

    ``betas`` is a list of symbols or a ``WaveletFamily``, whose pole-free rows
    are then used directly. Returns ``(matrices, excluded)``: points within
    ``pole_tol`` of a pole of delta (or a zero of Delta) are flagged and their
    matrices set to nan.
    """
    if isinstance(betas, WaveletFamily):
        rows = betas.rows
    else:
        rows = [_times_delta(b) for b in betas]
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    n = xi.shape[-1]
    lattice = LatticePair(n)
    excluded = near_pole(xi, pole_tol)
    ok = ~excluded
    out = np.full((xi.shape[0], len(rows), lattice.r), np.nan, dtype=complex)
    if np.any(ok):
        x = xi[ok]
        for k, p in enumerate(lattice.coset_reps):
            for i, row in enumerate(rows):
                out[ok, i, k] = row(x + p)
    return out, excluded


def _times_delta(beta):
    def row(xi):
        return beta(xi) * delta_ratio(xi)

    return row


def unitarity_deviation(mats) -> float:
    """max spectral norm of M^* M - I over the non-excluded matrices."""
    mats = np.asarray(mats)
    good = ~np.any(np.isnan(mats), axis=(1, 2))
    if not np.any(good):
        return float("nan")
    m = mats[good]
    gram = np.conj(np.swapaxes(m, 1, 2)) @ m - np.eye(m.shape[-1])
    return float(np.max(np.linalg.norm(gram, ord=2, axis=(1, 2))))


def wavelet_construct(G: FilterFunction, phi: ScalingFunction, qmf_tol: float = 1e-10, m: int = 64,
                      name: Optional[str] = None) -> WaveletFamily:
    """Complete the filter row to a unitary matrix and define the wavelets.

    eta^0 = alpha(-xi) G(xi); eta^1..eta^{r-1} come from a Householder
    completion at the sorted base point; then beta^i delta = alpha eta^i and
    H psi^i(2 xi) = beta^i(xi) delta(xi) H phi(xi).
    """
    dev = qmf_check(G, m=m)
    if dev > qmf_tol:
        raise QMFError(f"QMF deviation {dev:.3e} exceeds {qmf_tol:.1e}")
    n = G.n

    def eta0(xi):
        xi = np.asarray(xi, dtype=float)
        return np.asarray(G.modulus(xi)) * np.exp(1j * (np.asarray(G.phase(xi)) - alpha_phase(xi)))

    eta = completion_symbols(eta0, n)
    r = LatticePair(n).r

    def make_row(i):
        if i == 0:
            return G

        def row(xi):
            xi = np.asarray(xi, dtype=float)
            return phase_alpha(xi) * eta(xi)[..., i]

        return row

    rows = [make_row(i) for i in range(r)]
    profiles = [_wavelet_profile(rows[i], phi, f"psi{i}") for i in range(1, r)]
    return WaveletFamily(phi, G, rows, profiles, name or f"completed[{G.name}]")


def _wavelet_profile(row: Callable, phi: ScalingFunction, name: str) -> AnalyticProfile:
    def func(zeta):
        half = 0.5 * np.asarray(zeta, dtype=float)
        return row(half) * phi(half)

    sr = phi.freq.support_radius
    return AnalyticProfile(func, phi.n, name, None if sr is None else 2 * sr)


def cross_periodization_matrix(family: WaveletFamily, xi) -> np.ndarray:
    """P_{i,j}(xi) for the wavelets of ``family``, shape (N, r-1, r-1)."""
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    k = family.count
    out = np.zeros((xi.shape[0], k, k), dtype=complex)
    radius = family.phi.radius
    for i, a in enumerate(family.profiles):
        for j, b in enumerate(family.profiles):
            if j < i:
                out[:, i, j] = np.conj(out[:, j, i])
                continue
            sr = None
            if a.support_radius is not None and b.support_radius is not None:
                sr = max(a.support_radius, b.support_radius)
            out[:, i, j] = cross_periodization(a, b, xi, radius, sr)
    return out
