"""Generalized translation on the Weyl chamber.

delta_x * delta_y is the law of the ordered spectrum of x + u y u^* with u
Haar on U(n). For regular x, y it has the density

    k(x, y, h) = pi(rho) pi(h) / (pi(x) pi(y)) sum_{v,w} eps(v) eps(w) T(vy + wx - h)

on the affine plane x^1 + y^1 + R^n_0, taken against Lebesgue measure in the
simple-root coordinates d of h - x^1 - y^1. For n = 3 the density is a
piecewise polynomial whose pieces are cut out by lines in the d-plane, which
gives exact cell-wise Gauss rules; n = 2 reduces to t / (2rs) on an interval.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.integrate

from .special_functions import haar_unitary, mc_chunks
from .weyl_core import (
    HULL_TOL,
    TRACE_TOL,
    ChamberPoint,
    RootData,
    from_simple_root_coords,
    orbit_hull_contains,
    permutations_with_sign,
    simple_root_coords,
    vandermonde,
)

__all__ = [
    "QuadratureError",
    "SupportHypothesisError",
    "t_fun",
    "density_k",
    "rank1_density",
    "TranslationDensity",
    "SupportRegion",
    "support_bound",
    "HermitianSample",
    "sum_spectra",
    "translate",
    "Estimate",
    "marginal_histograms",
    "mc_marginal_histograms",
    "adjoint_check",
    "translation_norm_ratio",
    "translate_rank2_points",
]

REGULAR_TOL = 1e-9
DEFAULT_QUAD_TOL = 1e-10


class QuadratureError(RuntimeError):
    """Estimated quadrature error above the requested tolerance."""


class SupportHypothesisError(ValueError):
    """y + C(x) is not contained in the chamber."""


# ---------------------------------------------------------------- polytope volume


def _polytope_volume(a: np.ndarray, b: np.ndarray) -> float:
    """Volume of {u >= 0 : a u <= b} for a nonnegative matrix ``a``.

    Integrates one coordinate at a time; the innermost slice is an interval.
    """
    if np.any(b < 0):
        return 0.0
    col = a[:, 0]
    pos = col > 0
    umax = float(np.min(b[pos] / col[pos])) if np.any(pos) else math.inf
    if not math.isfinite(umax):
        raise ValueError("unbounded polytope")
    if a.shape[1] == 1:
        return umax
    rest = a[:, 1:]
    kinks = sorted({float(v) for v in (b[pos] / col[pos]) if 0 < v < umax})
    val, _ = scipy.integrate.quad(
        lambda u: _polytope_volume(rest, b - col * u), 0.0, umax, points=kinks or None, epsabs=1e-13, epsrel=1e-11, limit=200
    )
    return val


def t_fun(v) -> np.ndarray:
    """Volume function T on the trace-zero hyperplane.

    With v = y_1 alpha_1 + ... + y_{n-1} alpha_{n-1}: for n = 2 the indicator
    of y_1 >= 0, for n = 3 max(0, min(y_1, y_2)), and for larger n the volume
    of {y_n..y_q >= 0 : sum_k y_k a_kj <= y_j}.
    """
    v = np.asarray(v, dtype=float)
    n = v.shape[-1]
    scale = 1.0 + np.abs(v).max(axis=-1)
    if np.any(np.abs(v.sum(axis=-1)) > TRACE_TOL * scale):
        raise ValueError("T is defined on trace-zero vectors only")
    c = simple_root_coords(v)
    if n == 2:
        return (c[..., 0] >= 0).astype(float)
    if n == 3:
        return np.maximum(0.0, np.minimum(c[..., 0], c[..., 1]))
    a = RootData(n).nonsimple_expansion.T.astype(float)
    flat = c.reshape(-1, n - 1)
    out = np.array([_polytope_volume(a, row) for row in flat])
    return out.reshape(c.shape[:-1])


# ---------------------------------------------------------------- density


def _check_regular(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(np.diff(x) > 0):
        raise ValueError(f"{name} must be a chamber point (weakly decreasing)")
    if np.min(-np.diff(x)) <= REGULAR_TOL * (1.0 + np.abs(x).max()):
        raise ValueError(f"pi({name}) vanishes; the density formula needs regular points")
    return x


def _kernel_sum(x, y, h):
    """sum_{v,w} eps(v) eps(w) T(vy + wx - h) over S_n x S_n."""
    n = x.shape[-1]
    perms, signs = permutations_with_sign(n)
    total = np.zeros(h.shape[:-1])
    for pv, sv in zip(perms, signs):
        for pw, sw in zip(perms, signs):
            a = y[pv] + x[pw]
            d = a - h
            # remove rounding drift off the trace-zero plane
            d = d - d.mean(axis=-1, keepdims=True)
            total += int(sv) * int(sw) * t_fun(d)
    return total


def density_k(x, y, h) -> np.ndarray:
    """k(x, y, h) for regular chamber points x, y and h on the support plane."""
    x = _check_regular(x, "x")
    y = _check_regular(y, "y")
    h = np.asarray(h, dtype=float)
    n = x.shape[0]
    # h^1 is forced to x^1 + y^1; only h^0 enters
    h = h - h.mean(axis=-1, keepdims=True) + (x.mean() + y.mean())
    rho = RootData(n).rho
    pref = vandermonde(rho) / (vandermonde(x) * vandermonde(y))
    return pref * vandermonde(h) * _kernel_sum(x, y, h)


def rank1_density(r: float, s: float, t) -> np.ndarray:
    """Law of |r e + s u e u^*| for n = 2: density t / (2 r s) on [|r - s|, r + s]."""
    t = np.asarray(t, dtype=float)
    inside = (t >= abs(r - s)) & (t <= r + s)
    return np.where(inside, t / (2 * r * s), 0.0)


# ---------------------------------------------------------------- geometry of the n = 3 plane


def _clip(poly: np.ndarray, nrm: np.ndarray, off: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex polygon to {p : nrm . p <= off}."""
    if len(poly) == 0:
        return poly
    out = []
    vals = poly @ nrm - off
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        vp, vq = vals[i], vals[(i + 1) % m]
        if vp <= 0:
            out.append(p)
        if (vp < 0 < vq) or (vq < 0 < vp):
            out.append(p + (q - p) * (vp / (vp - vq)))
    return np.array(out) if out else np.zeros((0, 2))


def _area(poly) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _split(polys: List[np.ndarray], nrm, off) -> List[np.ndarray]:
    nrm = np.asarray(nrm, dtype=float)
    out = []
    for p in polys:
        vals = p @ nrm - off
        if np.all(vals <= 1e-14) or np.all(vals >= -1e-14):
            out.append(p)
            continue
        for part in (_clip(p, nrm, off), _clip(p, -nrm, -off)):
            if len(part) >= 3 and abs(_area(part)) > 1e-15:
                out.append(part)
    return out


def _unique_sorted(vals, lo, hi, tol=1e-12):
    vals = np.sort(np.asarray([v for v in vals if lo - tol <= v <= hi + tol] + [lo, hi]))
    keep = [vals[0]]
    for v in vals[1:]:
        if v - keep[-1] > tol * (1 + abs(v)):
            keep.append(v)
    return np.clip(np.array(keep), lo, hi)


def _n3_cells(x, y, extra_v=(), extra_h=(), extra_d=()):
    """Convex cells in the d-plane on which the n = 3 density is one polynomial.

    d = (d1, d2) are simple-root coordinates of h - s 1 with s = mean(x) + mean(y),
    so h = s + (d1, d2 - d1, -d2). Kinks of each T(vy + wx - h) lie on
    d1 = a1 - s, d2 = a1 + a2 - 2s and d2 - d1 = a2 - s with a = vy + wx.
    """
    s = x.mean() + y.mean()
    perms, _ = permutations_with_sign(3)
    av, ah, ad = [], [], []
    for pv in perms:
        for pw in perms:
            a = y[pv] + x[pw]
            av.append(a[0] - s)
            ah.append(a[0] + a[1] - 2 * s)
            ad.append(a[1] - s)
    d1max, d2max = max(av), max(ah)
    vs = _unique_sorted(av + list(extra_v), 0.0, d1max)
    hs = _unique_sorted(ah + list(extra_h), 0.0, d2max)
    diag = np.array(sorted(set(ad) | set(extra_d)))
    cells = []
    for i in range(len(vs) - 1):
        for j in range(len(hs) - 1):
            rect = np.array([[vs[i], hs[j]], [vs[i + 1], hs[j]], [vs[i + 1], hs[j + 1]], [vs[i], hs[j + 1]]])
            # chamber: 2 d1 - d2 >= 0 and 2 d2 - d1 >= 0
            rect = _clip(rect, np.array([-2.0, 1.0]), 0.0)
            rect = _clip(rect, np.array([1.0, -2.0]), 0.0)
            if len(rect) < 3 or abs(_area(rect)) < 1e-15:
                continue
            pieces = [rect]
            span = rect[:, 1] - rect[:, 0]
            for dv in diag[(diag > span.min()) & (diag < span.max())]:
                pieces = _split(pieces, (-1.0, 1.0), dv)
            cells.extend(pieces)
    return cells, s


def _triangle_rule(m: int):
    """Collapsed (Duffy) Gauss-Legendre rule on the reference triangle."""
    g, w = np.polynomial.legendre.leggauss(m)
    g = 0.5 * (g + 1)
    w = 0.5 * w
    u, v = np.meshgrid(g, g, indexing="ij")
    wu, wv = np.meshgrid(w, w, indexing="ij")
    # (u, v) in the square -> (u, v (1 - u)) in the triangle
    pts = np.stack([u.ravel(), (v * (1 - u)).ravel()], axis=-1)
    wts = (wu * wv * (1 - u)).ravel()
    return pts, wts


def _cells_rule(cells, m):
    """Nodes, weights and owning cell index of a fan-triangulated cell rule."""
    ref, rw = _triangle_rule(m)
    nodes, weights, owner = [], [], []
    for k, poly in enumerate(cells):
        p0 = poly[0]
        for i in range(1, len(poly) - 1):
            e1, e2 = poly[i] - p0, poly[i + 1] - p0
            jac = abs(e1[0] * e2[1] - e1[1] * e2[0])
            if jac == 0:
                continue
            nodes.append(p0 + ref[:, :1] * e1 + ref[:, 1:] * e2)
            weights.append(rw * jac)
            owner.append(np.full(len(rw), k))
    return np.concatenate(nodes), np.concatenate(weights), np.concatenate(owner)


def _d_to_h(d, s):
    return s + from_simple_root_coords(d)


# ---------------------------------------------------------------- density object


@dataclass(frozen=True)
class TranslationDensity:
    """The kernel of delta_x * delta_y on the plane x^1 + y^1 + R^n_0."""

    x: np.ndarray
    y: np.ndarray
    support_plane_offset: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = _check_regular(np.asarray(ChamberPoint(self.x).coords), "x")
        y = _check_regular(np.asarray(ChamberPoint(self.y).coords), "y")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "support_plane_offset", np.full(x.shape, x.mean() + y.mean()))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def kernel(self, h) -> np.ndarray:
        return density_k(self.x, self.y, h)

    def rule(self, order: int = 8, extra_lines=((), (), ())) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Quadrature nodes h, weights k(h) dd and owning cell ids over the support.

        Exact for polynomials times the density up to the Gauss order. For
        n = 3 ``extra_lines`` adds cut lines (vertical, horizontal, diagonal)
        in the d-plane, i.e. level sets of h_1, h_3 and h_2.
        """
        if self.n == 2:
            r = 0.5 * (self.x[0] - self.x[1])
            s = 0.5 * (self.y[0] - self.y[1])
            cuts = _unique_sorted(list(extra_lines[0]), abs(r - s), r + s)
            g, w = np.polynomial.legendre.leggauss(order)
            ts, ws, own = [], [], []
            for k in range(len(cuts) - 1):
                a, b = cuts[k], cuts[k + 1]
                ts.append(0.5 * (b - a) * g + 0.5 * (a + b))
                ws.append(0.5 * (b - a) * w)
                own.append(np.full(order, k))
            t = np.concatenate(ts)
            m = self.support_plane_offset[0]
            h = np.stack([m + t, m - t], axis=-1)
            return h, np.concatenate(ws) * rank1_density(r, s, t), np.concatenate(own)
        if self.n == 3:
            cells, s = _n3_cells(self.x, self.y, *extra_lines)
            d, w, own = _cells_rule(cells, order)
            h = _d_to_h(d, s)
            return h, w * self.kernel(h), own
        raise NotImplementedError("density quadrature is implemented for n = 2, 3")

    def total_mass(self, order: int = 4) -> float:
        _, w, _ = self.rule(order)
        return float(w.sum())

    def integrate(self, f: Callable, tol: float = DEFAULT_QUAD_TOL, order: int = 8,
                  max_order: int = 32) -> "Estimate":
        """Integral of f against the density.

        The Gauss order grows by half until two successive rules agree; their
        difference is the error estimate.
        """
        h, w, _ = self.rule(order)
        val = np.sum(w * f(h))
        while True:
            order2 = order + max(3, order // 2)
            h2, w2, _ = self.rule(order2)
            val2 = np.sum(w2 * f(h2))
            err = abs(val2 - val)
            if err <= tol * max(1.0, abs(val2)):
                return Estimate(val2, err, "density")
            if order2 >= max_order:
                raise QuadratureError(f"translation quadrature error {err:.3e} exceeds tolerance {tol:.1e}")
            order, val = order2, val2


# ---------------------------------------------------------------- support


@dataclass(frozen=True)
class SupportRegion:
    """The translated orbit hull y + conv(S_n . x)."""

    x: np.ndarray
    y: np.ndarray

    @property
    def vertices(self) -> np.ndarray:
        perms, _ = permutations_with_sign(len(self.x))
        return np.unique(self.y + self.x[perms], axis=0)

    @property
    def bounds(self) -> np.ndarray:
        """Per-coordinate [min, max] over the region, shape (n, 2)."""
        v = self.vertices
        return np.stack([v.min(axis=0), v.max(axis=0)], axis=-1)

    def contains(self, h, tol: float = HULL_TOL) -> np.ndarray:
        return orbit_hull_contains(np.asarray(h) - self.y, self.x, tol=tol)


def support_bound(x, y) -> SupportRegion:
    """y + C(x); requires the region to lie in the closed chamber."""
    x = np.asarray(ChamberPoint(x).coords)
    y = np.asarray(ChamberPoint(y).coords)
    region = SupportRegion(x, y)
    v = region.vertices
    if np.any(np.diff(v, axis=-1) > HULL_TOL * (1 + np.abs(v).max())):
        raise SupportHypothesisError("y + C(x) leaves the chamber; only the plane support applies")
    return region


# ---------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True)
class HermitianSample:
    """A Hermitian matrix together with its ordered spectrum."""

    matrix: np.ndarray
    spectrum: ChamberPoint

    @classmethod
    def from_matrix(cls, m) -> "HermitianSample":
        m = np.asarray(m, dtype=complex)
        if not np.allclose(m, m.conj().T, atol=1e-12):
            raise ValueError("matrix is not Hermitian")
        return cls(m, ChamberPoint.from_spectrum(np.linalg.eigvalsh(m)))


def sum_spectra(x, y, samples: int, seed: int):
    """Yield chunks of ordered spectra of diag(x) + u diag(y) u^*, u Haar."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[0]
    for size, rng in mc_chunks(samples, seed):
        u = haar_unitary(n, size, rng)
        m = (u * y[None, None, :]) @ u.conj().transpose(0, 2, 1)
        m[:, np.arange(n), np.arange(n)] += x
        yield np.linalg.eigvalsh(m)[:, ::-1]


@dataclass(frozen=True)
class Estimate:
    """A numerical value with an error estimate (standard error for Monte Carlo)."""

    value: complex
    error: float
    backend: str


def translate(f: Callable, x, y, backend: str = "density", samples: int = 100_000, seed: int = 0,
              tol: float = DEFAULT_QUAD_TOL) -> Estimate:
    """T_x f(y): integral of f against delta_x * delta_y.

    ``f`` maps an array of ordered spectra (..., n) to values.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not np.any(x):
        return Estimate(f(y[None, :])[0], 0.0, backend)
    if not np.any(y):
        return Estimate(f(x[None, :])[0], 0.0, backend)
    if backend == "density":
        return TranslationDensity(x, y).integrate(f, tol=tol)
    if backend == "montecarlo":
        s1, s2 = 0.0 + 0.0j, 0.0
        for spec in sum_spectra(x, y, samples, seed):
            vals = f(spec)
            s1 += np.sum(vals)
            s2 += float(np.sum(np.abs(vals) ** 2))
        mean = s1 / samples
        var = max(s2 / samples - abs(mean) ** 2, 0.0)
        if np.isrealobj(f(x[None, :])):
            mean = mean.real
        return Estimate(mean, math.sqrt(var / samples), "montecarlo")
    raise ValueError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------- histograms


def _bin_edges(x, y, bins):
    """Per-eigenvalue bin edges over the range reachable by the support."""
    try:
        b = support_bound(x, y).bounds
    except SupportHypothesisError:
        # Weyl inequalities: x_j + y_k bounds h_i from above when j + k = i + 1
        # and from below when j + k = i + n (0-based: j + k = i and i + n - 1)
        n = len(x)
        b = np.empty((n, 2))
        for i in range(n):
            b[i, 1] = min(x[j] + y[i - j] for j in range(i + 1))
            b[i, 0] = max(x[j] + y[i + n - 1 - j] for j in range(i, n))
    return [np.linspace(lo, hi, bins + 1) for lo, hi in b]


def marginal_histograms(x, y, bins: int = 64) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Exact per-eigenvalue bin probabilities under the density.

    Bin edges become cut lines, so every cell lies in one bin of each
    coordinate and the piecewise polynomial density is integrated exactly.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    dens = TranslationDensity(x, y)
    edges = _bin_edges(x, y, bins)
    s = dens.support_plane_offset[0]
    if n == 2:
        # h1 = s + t, h2 = s - t
        extra = (list(edges[0] - s) + list(s - edges[1]), (), ())
    elif n == 3:
        # h1 = s + d1, h3 = s - d2, h2 = s + d2 - d1
        extra = (list(edges[0] - s), list(s - edges[2]), list(edges[1] - s))
    else:
        raise NotImplementedError("exact histograms are implemented for n = 2, 3")
    h, w, own = dens.rule(order=4, extra_lines=extra)
    mass = np.bincount(own, weights=w)
    # locate each cell by the mean of its nodes, an interior point
    pos = np.zeros((own.max() + 1, n))
    np.add.at(pos, own, h)
    pos /= np.bincount(own)[:, None]
    probs = []
    for i in range(n):
        idx = np.clip(np.searchsorted(edges[i], pos[:, i], side="right") - 1, 0, bins - 1)
        probs.append(np.bincount(idx, weights=mass, minlength=bins))
    return probs, edges


def mc_marginal_histograms(x, y, edges, samples: int, seed: int) -> List[np.ndarray]:
    """Monte-Carlo per-eigenvalue bin frequencies over the given edges."""
    n = len(x)
    counts = [np.zeros(len(e) - 1) for e in edges]
    for spec in sum_spectra(x, y, samples, seed):
        for i in range(n):
            c, _ = np.histogram(spec[:, i], bins=edges[i])
            counts[i] += c
    return [c / samples for c in counts]


# ---------------------------------------------------------------- rank 2 operator checks


def _gl(a, b, m):
    g, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (b - a) * g + 0.5 * (a + b), 0.5 * (b - a) * w


def _rank2_translate_grid(f, y, u, r, m_inner):
    """T_y f at chamber points (u + r, u - r); f takes (u, r) arrays."""
    uy = 0.5 * (y[0] + y[1])
    s = 0.5 * (y[0] - y[1])
    if s == 0:
        return f(u + uy, r)
    g, w = np.polynomial.legendre.leggauss(m_inner)
    lo = np.abs(r - s)[..., None]
    hi = (r + s)[..., None]
    t = 0.5 * (hi - lo) * g + 0.5 * (hi + lo)
    wt = 0.5 * (hi - lo) * w
    vals = f((u + uy)[..., None], t) * t / (2 * r[..., None] * s)
    return np.sum(vals * wt, axis=-1)


def _rank2_outer(y, extent, m):
    """Outer nodes (u, r) and weights of omega(x) dx on the truncated chamber."""
    s = 0.5 * (y[0] - y[1])
    uu, wu = _gl(-extent, extent, m)
    pieces = [(0.0, s), (s, extent)] if 0 < s < extent else [(0.0, extent)]
    rs, wr = zip(*(_gl(a, b, m) for a, b in pieces))
    r, wr = np.concatenate(rs), np.concatenate(wr)
    U, Rr = np.meshgrid(uu, r, indexing="ij")
    W = np.outer(wu, wr) * 2.0 * (2 * Rr) ** 2  # dx = 2 du dr, omega = (2r)^2
    return U, Rr, W


def adjoint_check(f: Callable, g: Callable, y, extent: float = 8.0, order: int = 64) -> float:
    """|<T_y f, g> - <f, T_ybar g>| in L^2(chamber, omega) for n = 2.

    ``f`` and ``g`` take the chamber parametrisation (u, r), x = (u + r, u - r).
    """
    y = np.asarray(y, dtype=float)
    if len(y) != 2:
        raise NotImplementedError("the adjoint check is implemented for n = 2")
    if not np.any(y):
        return 0.0
    ybar = -y[::-1]
    U, Rr, W = _rank2_outer(y, extent, order)
    lhs = np.sum(_rank2_translate_grid(f, y, U, Rr, order) * np.conj(g(U, Rr)) * W)
    rhs = np.sum(f(U, Rr) * np.conj(_rank2_translate_grid(g, ybar, U, Rr, order)) * W)
    return float(abs(lhs - rhs))


def translation_norm_ratio(f: Callable, y, extent: float = 8.0, order: int = 64) -> float:
    """||T_y f|| / ||f|| in L^2(chamber, omega) for n = 2."""
    y = np.asarray(y, dtype=float)
    U, Rr, W = _rank2_outer(y, extent, order)
    ty = _rank2_translate_grid(f, y, U, Rr, order)
    return float(math.sqrt(np.sum(np.abs(ty) ** 2 * W) / np.sum(np.abs(f(U, Rr)) ** 2 * W)))


def translate_rank2_points(f: Callable, y, points, order: int = 64) -> np.ndarray:
    """T_y f at many chamber points for n = 2, by Gauss rules on [|r - s|, r + s].

    ``f`` maps ordered spectra (..., 2) to values. Points with x_1 = x_2 are
    scalar matrices, where delta_x * delta_y = delta_{x + y}.
    """
    y = np.asarray(y, dtype=float)
    pts = -np.sort(-np.asarray(points, dtype=float), axis=-1)
    u = 0.5 * (pts[..., 0] + pts[..., 1])
    r = 0.5 * (pts[..., 0] - pts[..., 1])
    scalar = r <= REGULAR_TOL * (1 + np.abs(pts).max())
    r_safe = np.where(scalar, 1.0, r)

    def fur(uu, t):
        return f(np.stack([uu + t, uu - t], axis=-1))

    out = _rank2_translate_grid(fur, y, u, r_safe, order)
    if np.any(scalar):
        out = np.where(scalar, f(pts + y), out)
    return out
