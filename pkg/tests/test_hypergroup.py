import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull, HalfspaceIntersection

from radial_mra.hypergroup import (
    HermitianSample,
    QuadratureError,
    SupportHypothesisError,
    TranslationDensity,
    adjoint_check,
    density_k,
    rank1_density,
    sum_spectra,
    support_bound,
    t_fun,
    translate,
    translation_norm_ratio,
)
from radial_mra.special_functions import bessel_J
from radial_mra.weyl_core import RootData, from_simple_root_coords


def chamber(rng, n, scale=2.0, gap=0.3):
    while True:
        x = -np.sort(-rng.normal(size=n) * scale)
        if np.min(-np.diff(x)) > gap:
            return x


def test_t_fun_examples():
    assert t_fun(0.7 * np.array([1.0, -1.0])) == 1.0
    assert t_fun(from_simple_root_coords([2.0, 3.0])) == 2.0
    assert t_fun(from_simple_root_coords([-0.5, 3.0])) == 0.0
    assert t_fun([-1.0, 1.0]) == 0.0
    with pytest.raises(ValueError):
        t_fun([1.0, 0.0, 0.5])


@pytest.mark.parametrize("c", [[1.0, 2.0, 1.5], [0.3, 2.0, 0.9], [2.0, 0.5, 2.0]])
def test_t_fun_rank4_against_hull(c):
    a = RootData(4).nonsimple_expansion.T.astype(float)
    p = a.shape[1]
    c = np.array(c)
    halfspaces = np.vstack([np.hstack([a, -c[:, None]]), np.hstack([-np.eye(p), np.zeros((p, 1))])])
    hull = ConvexHull(HalfspaceIntersection(halfspaces, np.full(p, 1e-3)).intersections)
    assert abs(t_fun(from_simple_root_coords(c)) - hull.volume) < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 3), min_size=2, max_size=2), st.lists(st.floats(0, 3), min_size=2, max_size=2))
def test_t_monotone_n3(u, dv):
    u = np.array(u)
    v = u + np.array(dv)
    tu = t_fun(from_simple_root_coords(u))
    tv = t_fun(from_simple_root_coords(v))
    assert tu >= 0 and tu <= tv + 1e-12


def test_t_monotone_n4():
    rng = np.random.default_rng(0)
    for _ in range(10):
        u = rng.uniform(0, 2, 3)
        v = u + rng.uniform(0, 1, 3)
        assert t_fun(from_simple_root_coords(u)) <= t_fun(from_simple_root_coords(v)) + 1e-9


def test_rank1_reduction():
    rng = np.random.default_rng(1)
    for _ in range(5):
        r, s = rng.uniform(0.2, 3, 2)
        cx, cy = rng.normal(size=2)
        x = np.array([cx + r, cx - r])
        y = np.array([cy + s, cy - s])
        t = rng.uniform(0, r + s + 1, 200)
        h = np.stack([cx + cy + t, cx + cy - t], axis=-1)
        assert np.max(np.abs(density_k(x, y, h) - rank1_density(r, s, t))) < 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_density_mass_symmetry_and_plane(n):
    rng = np.random.default_rng(n)
    for _ in range(3):
        x, y = chamber(rng, n), chamber(rng, n)
        dens = TranslationDensity(x, y)
        assert abs(dens.total_mass() - 1) < 1e-12
        h, w, _ = dens.rule(4)
        k = dens.kernel(h)
        assert np.min(k) > -1e-12
        assert np.max(np.abs(k - density_k(y, x, h))) < 1e-12 * (1 + np.abs(k).max())
        # only h^0 matters, and the plane offset is x^1 + y^1
        assert np.allclose(dens.kernel(h + 0.37), k)
        assert np.allclose(h.mean(axis=-1), x.mean() + y.mean())


def test_density_rejects_singular():
    with pytest.raises(ValueError):
        density_k(np.array([1.0, 1.0]), np.array([1.0, 0.0]), np.array([1.0, 1.0]))


@pytest.mark.parametrize("n", [2, 3])
def test_support_bound(n):
    rng = np.random.default_rng(10 + n)
    x = chamber(rng, n, scale=0.3, gap=0.05) * 0.5
    y = np.arange(n, 0, -1) * 3.0
    region = support_bound(x, y)
    dens = TranslationDensity(x, y)
    h, _, _ = dens.rule(6)
    k = dens.kernel(h)
    out = ~region.contains(h, tol=1e-9)
    assert np.all(np.abs(k[out]) <= 1e-9 * np.abs(k).max())
    # random chamber points on the plane, outside the hull carry no density
    pts = -np.sort(-(y + rng.normal(size=(500, n)) * 2), axis=1)
    pts = pts - pts.mean(axis=1, keepdims=True) + (x.mean() + y.mean())
    far = ~region.contains(pts, tol=1e-9)
    assert np.all(np.abs(density_k(x, y, pts[far])) <= 1e-9 * np.abs(k).max())
    for spec in sum_spectra(x, y, 5000, seed=3):
        assert np.all(region.contains(spec, tol=1e-8))


def test_support_bound_small_segment():
    eps = 0.01
    region = support_bound([eps, -eps], [5.0, 1.0])
    assert np.allclose(sorted(map(tuple, region.vertices)), [(5 - eps, 1 + eps), (5 + eps, 1 - eps)])


def test_support_hypothesis_failure():
    with pytest.raises(SupportHypothesisError):
        support_bound([3.0, -3.0], [0.5, -0.5])


def test_translate_neutral_element():
    f = lambda h: np.exp(-np.sum(h**2, axis=-1))
    y = np.array([1.2, 0.1, -0.4])
    for backend in ("density", "montecarlo"):
        assert translate(f, np.zeros(3), y, backend=backend).value == f(y[None])[0]


@pytest.mark.parametrize("n", [2, 3])
def test_product_formula(n):
    rng = np.random.default_rng(20 + n)
    for k in range(3):
        x, y = chamber(rng, n), chamber(rng, n)
        z = 1j * rng.normal(size=n) * 0.8 + 0.1 * rng.normal(size=n)
        f = lambda h: bessel_J(h, z)
        ref = bessel_J(x, z) * bessel_J(y, z)
        dens = translate(f, x, y, backend="density")
        assert abs(dens.value - ref) < 1e-9 * max(1.0, abs(ref))
        mc = translate(f, x, y, backend="montecarlo", samples=50_000, seed=k)
        assert abs(mc.value - ref) < 3 * np.sqrt(2) * mc.error + 1e-12


def test_backends_agree_smooth_f():
    rng = np.random.default_rng(5)
    f = lambda h: np.exp(-0.3 * np.sum(h**2, axis=-1)) * (1 + h[..., 0])
    for n in (2, 3):
        x, y = chamber(rng, n), chamber(rng, n)
        a = translate(f, x, y, backend="density", tol=1e-8)
        b = translate(f, x, y, backend="montecarlo", samples=100_000, seed=9)
        assert abs(a.value - b.value) < 3 * b.error


def test_montecarlo_deterministic():
    f = lambda h: h[..., 0] ** 2
    x, y = np.array([1.0, 0.0, -1.0]), np.array([2.0, 0.5, 0.0])
    a = translate(f, x, y, backend="montecarlo", samples=60_000, seed=4)
    b = translate(f, x, y, backend="montecarlo", samples=60_000, seed=4)
    assert a == b


def test_quadrature_error_signalled():
    # a wildly oscillating integrand defeats the order comparison
    f = lambda h: np.cos(400 * h[..., 0])
    with pytest.raises(QuadratureError):
        translate(f, np.array([2.0, 0.0, -2.0]), np.array([1.0, 0.0, -1.5]), tol=1e-12)


def bump(c, w):
    return lambda u, r: np.exp(-((u - c[0]) ** 2 + (r - c[1]) ** 2) / w)


def test_adjoint_and_contraction():
    f, g = bump((0.3, 1.0), 0.5), bump((-0.2, 1.8), 0.7)
    assert adjoint_check(f, g, [0.0, 0.0]) == 0.0
    rng = np.random.default_rng(6)
    for _ in range(3):
        y = chamber(rng, 2, scale=1.0, gap=0.2)
        assert adjoint_check(f, g, y, order=96) < 1e-6
        assert translation_norm_ratio(f, y) <= 1 + 1e-9


def test_hermitian_sample():
    m = np.array([[2.0, 1j], [-1j, 0.0]])
    s = HermitianSample.from_matrix(m)
    assert np.allclose(s.spectrum.coords, [1 + np.sqrt(2), 1 - np.sqrt(2)])
    with pytest.raises(ValueError):
        HermitianSample.from_matrix([[0, 1], [0, 0]])


def test_density_integration_raises_order_for_oscillatory_kernels():
    # orders 8 and 11 differ by ~5e-7 here; the refined rule meets the product formula
    x, y = np.array([2.0, -1.0, -1.5]), np.array([1.5, 0.3, -2.0])
    z = 6j * np.array([1.0, 0.2, -1.3])
    est = TranslationDensity(x, y).integrate(lambda h: bessel_J(h, z))
    assert abs(est.value - bessel_J(x, z) * bessel_J(y, z)) < 1e-12
    assert est.error < 1e-10
