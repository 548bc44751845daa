import numpy as np
import pytest

from radial_mra.hankel import (
    AnalyticProfile,
    RadialFunctionGrid,
    TensorGrid,
    TruncationError,
    calibrate_constant,
    closed_form_constant,
    default_grid,
    dilate,
    freq_lambda_translate,
    freq_translate,
    hankel_forward,
    hankel_inverse,
    lambda_multiplier,
)
from radial_mra.hypergroup import translate_rank2_points
from radial_mra.special_functions import bessel_J, m_lambda, partitions
from radial_mra.weyl_core import permutations_with_sign


def gaussian(x):
    return np.exp(-0.5 * np.sum(x**2, axis=-1))


def band_limited(seed, n):
    """Gaussian-windowed symmetric polynomial; its transform has the same form."""
    rng = np.random.default_rng(seed)
    c = rng.normal(size=4)
    s = rng.uniform(0.9, 1.1)

    def f(x):
        p1 = x.sum(-1)
        p2 = (x**2).sum(-1)
        return np.exp(-p2 / (2 * s * s)) * (c[0] + c[1] * p1 + c[2] * p2 + c[3] * p1**2)

    return f


@pytest.mark.parametrize("n", [2, 3])
def test_calibration_matches_closed_form(n):
    assert abs(calibrate_constant(default_grid(n)) / closed_form_constant(n) - 1) < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_gaussian_fixed_point(n):
    g = default_grid(n)
    G = RadialFunctionGrid.from_function(gaussian, g)
    H = hankel_forward(G)
    assert np.max(np.abs(H.values - G.values)[g.regular]) < 1e-6
    assert hankel_forward(RadialFunctionGrid(g, np.zeros(g.shape))).norm() == 0


@pytest.mark.parametrize("n", [2, 3])
def test_plancherel_and_roundtrip(n):
    g = default_grid(n)
    for seed in range(3):
        F = RadialFunctionGrid.from_function(band_limited(seed, n), g)
        H = hankel_forward(F)
        assert abs(H.norm() / F.norm() - 1) < 1e-5
        back = hankel_inverse(H)
        assert (back - F).norm() / F.norm() < 1e-5


def test_output_symmetric():
    g = default_grid(3)
    H = hankel_forward(RadialFunctionGrid.from_function(band_limited(7, 3), g))
    perms, _ = permutations_with_sign(3)
    for p in perms:
        assert np.allclose(H.values, np.transpose(H.values, p), atol=1e-12)


def test_truncation_signalled():
    g = TensorGrid(2, 32, 3.0)
    with pytest.raises(TruncationError):
        hankel_forward(RadialFunctionGrid.from_function(gaussian, g))


@pytest.mark.parametrize("n", [2, 3])
def test_dilation_exact_nodes(n):
    g = default_grid(n)
    c = calibrate_constant(g)
    F = RadialFunctionGrid.from_function(band_limited(1, n), g)
    H = hankel_forward(F, c_h=c)
    assert np.array_equal(dilate(F, 1.0).values, F.values)
    for a in (0.5, 2.0):
        D = dilate(F, a)
        assert abs(D.norm() / F.norm() - 1) < 1e-8
        lhs = hankel_forward(D, out_grid=g.scaled(1 / a), c_h=c)
        rhs = dilate(H, 1 / a)
        assert (lhs - rhs).norm() / rhs.norm() < 1e-6


@pytest.mark.parametrize("n,a,tol", [(2, 0.5, 1e-8), (2, 1.2, 1e-8), (3, 0.8, 1e-6), (3, 1.15, 1e-6)])
def test_dilation_exponent_gaussian(n, a, tol):
    # the Euclidean transform of exp(-|X|^2 / 2a^2) on Herm(n) is a^{n^2} exp(-a^2 |Y|^2 / 2)
    g = default_grid(n)
    G = RadialFunctionGrid.from_function(gaussian, g)
    lhs = hankel_forward(dilate(G, a, func=gaussian))
    ref = a ** (n * n / 2) * np.exp(-0.5 * a * a * np.sum(g.points**2, -1))
    assert np.max(np.abs(lhs.values - ref)[g.regular]) < tol


def test_dilation_resampled_rank2():
    g = default_grid(2)
    f = band_limited(3, 2)
    F = RadialFunctionGrid.from_function(f, g)
    lhs = hankel_forward(dilate(F, 0.5, func=f))
    rhs = RadialFunctionGrid(g, 0.5 ** (4 / 2) * hankel_forward(F, out_grid=g.scaled(0.5)).values)
    # the compressed function is resolved by fewer nodes; the error is grid-limited
    assert (lhs - rhs).norm() / rhs.norm() < 1e-4


def test_freq_translate_consistency_rank2():
    g = default_grid(2)
    f = band_limited(4, 2)
    y = np.array([0.9, -0.4])
    F = RadialFunctionGrid.from_function(f, g)
    assert freq_translate(np.zeros(2), F) is F
    ty = translate_rank2_points(f, y, g.points.reshape(-1, 2), order=48).reshape(g.shape)
    a = hankel_forward(RadialFunctionGrid(g, ty))
    b = freq_translate(y, hankel_forward(F))
    assert (a - b).norm() / b.norm() < 1e-4


def test_lambda_multiplier():
    rng = np.random.default_rng(0)
    for n in (2, 3):
        xi = rng.uniform(-6, 6, size=(50, n))
        for lam in partitions(n, 3):
            mult = lambda_multiplier(lam, xi)
            ref = m_lambda(lam) * bessel_J(xi, 1j * lam.shifted())
            assert np.max(np.abs(mult - ref)) < 1e-9
            # the numerator Delta S_lambda has I-periodic modulus
            q = 2 * np.pi * rng.integers(-2, 3, size=(50, n))
            num = lambda p: np.abs(mult_num(lam, p))
            assert np.max(np.abs(num(xi + q) - num(xi))) < 1e-9


def mult_num(lam, xi):
    from radial_mra.special_functions import schur_S
    from radial_mra.weyl_core import weyl_denominator

    return weyl_denominator(xi) * schur_S(lam, xi)


def test_lambda_multiplier_bounded_on_torus():
    g = TensorGrid(2, 40, np.pi)
    for lam in partitions(2, 4):
        F = AnalyticProfile(lambda x: np.ones(x.shape[:-1]), 2).sample(g)
        out = freq_lambda_translate(lam, F)
        assert np.all(np.isfinite(out.values))
        assert np.max(np.abs(out.values)) <= 10.0
