import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radial_mra.hankel import AnalyticProfile, RadialFunctionGrid, TensorGrid, default_grid
from radial_mra.mra import (
    FilterFunction,
    QMFError,
    RieszBasisError,
    SlowDecayError,
    TruncationTooSmall,
    calibrate_shannon,
    cell_rule,
    classical_shannon_hat,
    classical_to_radial,
    cross_periodization_matrix,
    decompose,
    max_resolved_level,
    direct_gram,
    from_json,
    gaussian_scaling,
    gram_matrix,
    householder_completion,
    lattice_sum,
    membership_symbol,
    meyer_family,
    meyer_filter,
    meyer_hat,
    meyer_scaling,
    orthonormalize,
    periodization,
    q_indicator,
    qmf_check,
    riesz_bounds,
    sample_family,
    shannon_family,
    shannon_filter,
    shannon_gamma,
    shannon_scaling,
    shift_noninvariance_check,
    tensor_meyer_hat,
    to_json,
    torus_volume,
    two_scale_check,
    two_scale_coefficients,
    two_scale_constant,
    unitarity_deviation,
    wavelet_construct,
    wavelet_matrix,
)
from radial_mra.special_functions import Partition, bessel_J, m_lambda, partitions, schur_S
from radial_mra.weyl_core import LatticePair, RootData, weyl_denominator


def random_points(n, count, seed=0, low=0.0, high=2 * np.pi):
    return np.random.default_rng(seed).uniform(low, high, size=(count, n))


@pytest.fixture(scope="module")
def meyer2():
    return meyer_family(2)


# periodization and Riesz bounds

def test_periodization_zero_profile():
    phi = shannon_scaling(2, 0.0)
    assert np.all(phi.periodization(random_points(2, 50)) == 0)


@pytest.mark.parametrize("n", [2, 3])
def test_shannon_periodization_constant(n):
    phi = shannon_scaling(n)
    p = phi.periodization(random_points(n, 500, seed=n, low=-3 * np.pi, high=3 * np.pi))
    assert np.max(np.abs(p - 1.0)) < 1e-12


def test_single_translate_periodization():
    phi = meyer_scaling(2)
    # inside |xi|_inf < 2 pi/3 only the q = 0 translate of the Meyer profile is nonzero
    xi = random_points(2, 100, low=-2.0, high=2.0)
    assert np.allclose(phi.periodization(xi), np.abs(phi(xi)) ** 2 / 2, atol=1e-14)


def test_slow_decay_detected():
    def heavy(xi):
        return 1.0 / (1.0 + np.sum(np.abs(xi), axis=-1)) ** 0.6

    with pytest.raises(SlowDecayError):
        lattice_sum(heavy, np.zeros((1, 2)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_periodization_periodic_and_symmetric(seed):
    phi = gaussian_scaling(2, width=1.3)
    rng = np.random.default_rng(seed)
    xi = rng.uniform(-np.pi, np.pi, size=(8, 2))
    shift = 2 * np.pi * rng.integers(-2, 3, size=(8, 2))
    p = phi.periodization(xi)
    assert np.allclose(phi.periodization(xi + shift), p, rtol=1e-10)
    assert np.allclose(phi.periodization(xi[:, ::-1]), p, rtol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 5.0))
def test_riesz_bounds_quadratic_in_scale(c):
    phi = gaussian_scaling(2)
    a, b = riesz_bounds(phi)
    a2, b2 = riesz_bounds(phi.scaled(c))
    assert math.isclose(a2, c * c * a, rel_tol=1e-12)
    assert math.isclose(b2, c * c * b, rel_tol=1e-12)


def test_riesz_bounds_scale_by_two():
    a, b = riesz_bounds(shannon_scaling(2).scaled(2.0))
    assert abs(a - 4) < 1e-12 and abs(b - 4) < 1e-12


# orthonormalization

def test_orthonormalize_gaussian():
    phi_star = orthonormalize(gaussian_scaling(2))
    a, b = riesz_bounds(phi_star)
    assert abs(a - 1) < 1e-10 and abs(b - 1) < 1e-10


def test_orthonormalize_fixes_orthonormal_input():
    phi = shannon_scaling(2)
    xi = random_points(2, 200, low=-np.pi, high=np.pi)
    assert np.max(np.abs(orthonormalize(phi)(xi) - phi(xi))) < 1e-12


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 4.0), st.floats(0.0, 2 * np.pi))
def test_orthonormalize_ignores_scalar(modulus, angle):
    phi = gaussian_scaling(2, width=1.5)
    c = modulus * np.exp(1j * angle)
    xi = random_points(2, 20, low=-np.pi, high=np.pi)
    a = orthonormalize(phi)(xi)
    b = orthonormalize(phi.scaled(c))(xi)
    assert np.allclose(b, a * np.exp(1j * angle), atol=1e-12)


def test_orthonormalize_rejects_non_riesz():
    with pytest.raises(RieszBasisError):
        orthonormalize(shannon_scaling(2, 0.0))


# Gram matrices and calibration

def test_gram_identity_shannon_n2():
    g, parts = gram_matrix(shannon_scaling(2), lam_max=3)
    assert len(parts) == len(partitions(2, 3))
    assert np.max(np.abs(g - np.eye(len(parts)))) < 1e-6


def test_gram_zero_profile():
    g, _ = gram_matrix(shannon_scaling(2, 0.0), lam_max=2)
    assert np.all(g == 0)


def test_gram_diagonal_is_weighted_schur_norm():
    phi = gaussian_scaling(2)
    g, parts = gram_matrix(phi, lam_max=2)
    pts, wts = cell_rule(2, (), 48)
    p = phi.periodization(pts)
    for k, lam in enumerate(parts):
        direct = np.sum(p * np.abs(schur_S(lam, pts)) ** 2 * np.abs(weyl_denominator(pts)) ** 2 * wts)
        assert math.isclose(g[k, k].real, direct / torus_volume(2), rel_tol=1e-8)


def test_gram_against_lebesgue_inner_products():
    # the unperiodized L^2(omega) Gram matrix carries the torus volume
    phi = shannon_scaling(2)
    g, _ = direct_gram(phi, 2)
    assert np.max(np.abs(g / torus_volume(2) - np.eye(g.shape[0]))) < 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_calibration_accepts_one_candidate(n):
    cal = calibrate_shannon(n, lam_max=4 if n == 2 else 3)
    assert abs(cal.kappa - math.sqrt(math.factorial(n))) < 1e-9
    assert cal.accepted == ["gram"]
    assert abs(cal.p_deviation["literal"] - (1 - 1 / math.factorial(n))) < 1e-12


def test_gram_identity_iff_periodization_one():
    for kappa in (math.sqrt(2), 1.0, 1.2):
        phi = shannon_scaling(2, kappa)
        g, _ = gram_matrix(phi, lam_max=4)
        a, b = riesz_bounds(phi)
        gram_ok = np.max(np.abs(g - np.eye(g.shape[0]))) < 1e-6
        p_ok = max(abs(a - 1), abs(b - 1)) < 1e-6
        assert gram_ok == p_ok


# two-scale relation

@pytest.mark.parametrize("n", [2, 3])
def test_shannon_two_scale_exact(n):
    res = two_scale_check(shannon_scaling(n))
    assert res.residual < 1e-14
    assert res.symmetry_defect < 1e-12
    xi = random_points(n, 300, seed=1, low=-np.pi, high=np.pi)
    ok = np.abs(weyl_denominator(xi)) > 1e-6
    assert np.allclose(res.gamma(xi)[ok], shannon_gamma(n)(xi)[ok], atol=1e-12)


def test_shannon_filter_relation_pointwise():
    n = 2
    phi = shannon_scaling(n)
    G = shannon_filter(n)
    xi = random_points(n, 1000, seed=2, low=-2 * np.pi, high=2 * np.pi)
    # H phi(2 xi) = G(xi) H phi(xi) on the support of H phi
    assert np.max(np.abs(phi(2 * xi) - G(xi) * phi(xi))) < 1e-14


def test_gaussian_has_no_two_scale_relation():
    assert two_scale_check(gaussian_scaling(2)).residual > 0.5


def test_two_scale_invariant_under_rescaling():
    xi = random_points(2, 100, low=-np.pi, high=np.pi)
    g1 = two_scale_check(meyer_scaling(2)).gamma(xi)
    g2 = two_scale_check(meyer_scaling(2).scaled(3.0)).gamma(xi)
    assert np.allclose(g1, g2, atol=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_two_scale_constant_against_inner_products(n):
    # oracle: <phi_{-1,0}, phi_{0,l}> / (2 pi)^n by direct frequency quadrature
    phi = shannon_scaling(n)
    alphas, parts = two_scale_coefficients(shannon_gamma(n), 3, breakpoints=(-np.pi / 2, np.pi / 2))
    pts, wts = cell_rule(n, (), 40 if n == 2 else 24, np.pi / 2)
    q = RootData(n).q
    lhs = weyl_denominator(2 * pts) * schur_S(parts[0], 2 * pts) * phi(2 * pts)
    for k, lam in enumerate(parts):
        rhs = np.conj(weyl_denominator(pts) * schur_S(lam, pts) * phi(pts))
        ip = np.sum(lhs * rhs * wts) * 2.0 ** (n * n / 2 - q) / math.factorial(n)
        assert abs(ip / torus_volume(n) - alphas[k]) < 1e-10
    assert abs(abs(two_scale_constant(n)) - 2.0 ** (-n / 2) * math.sqrt(math.factorial(n))) < 1e-15


# QMF identity

@pytest.mark.parametrize("n", [2, 3])
def test_shannon_qmf_exact(n):
    assert qmf_check(shannon_filter(n)) == 0.0


@pytest.mark.parametrize("n", [2, 3])
def test_qmf_constant_one_fails(n):
    G = FilterFunction(n, lambda xi: np.ones(np.asarray(xi).shape[:-1]))
    assert qmf_check(G) == 2**n - 1


def test_qmf_half_scaled():
    assert qmf_check(shannon_filter(2).scaled(0.5)) == 0.75


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 3.0))
def test_qmf_scaling_law(c):
    dev = qmf_check(shannon_filter(2).scaled(c), m=16)
    assert math.isclose(dev, abs(c * c - 1), abs_tol=1e-12)


def test_shannon_q_translates_tile():
    n = 3
    xi = random_points(n, 2000, seed=3)
    total = sum(q_indicator(xi, p) for p in LatticePair(n).coset_reps)
    assert np.all(total == 1.0)


def test_meyer_qmf():
    assert qmf_check(meyer_filter(2)) < 1e-13
    assert qmf_check(meyer_filter(3), m=24) < 1e-13


def test_wavelet_construct_rejects_non_qmf():
    with pytest.raises(QMFError):
        wavelet_construct(shannon_filter(2).scaled(0.9), shannon_scaling(2))


# wavelet matrices and completion

@pytest.mark.parametrize("n", [2, 3])
def test_shannon_wavelet_matrix_unitary(n):
    fam = shannon_family(n)
    assert fam.count == 2**n - 1
    mats, excluded = wavelet_matrix(fam.betas, random_points(n, 10_000, seed=4))
    assert unitarity_deviation(mats) <= 1e-10
    assert excluded.sum() == 0


def test_shannon_wavelet_matrix_permutation_pattern():
    fam = shannon_family(2)
    mats, _ = wavelet_matrix(fam, random_points(2, 500, seed=5))
    nonzero = np.abs(mats) > 1e-12
    assert np.all(nonzero.sum(axis=1) == 1) and np.all(nonzero.sum(axis=2) == 1)
    assert np.allclose(np.abs(mats[nonzero]), 1.0, atol=1e-14)


def test_first_row_normalized(meyer2):
    mats, _ = wavelet_matrix(meyer2, random_points(2, 500, seed=6))
    assert np.allclose(np.linalg.norm(mats[:, 0, :], axis=-1), 1.0, atol=1e-13)


def test_pole_points_excluded():
    fam = shannon_family(2)
    xi = np.array([[1.0, 1.0], [1.0, 1.0 + np.pi], [0.3, 1.1]])
    mats, excluded = wavelet_matrix(fam.betas, xi)
    assert excluded.tolist() == [True, True, False]
    assert np.all(np.isnan(mats[:2])) and not np.any(np.isnan(mats[2]))


@pytest.mark.parametrize("n", [2, 3])
def test_completed_shannon_unitary(n):
    fam = wavelet_construct(shannon_filter(n), shannon_scaling(n))
    assert fam.count == 2**n - 1
    mats, _ = wavelet_matrix(fam, random_points(n, 2000, seed=7))
    assert unitarity_deviation(mats) <= 1e-10


def test_meyer_family_unitary_and_cross_periodization(meyer2):
    xi = random_points(2, 2000, seed=8)
    mats, _ = wavelet_matrix(meyer2, xi)
    assert unitarity_deviation(mats) <= 1e-10
    p = cross_periodization_matrix(meyer2, xi[:100])
    assert np.max(np.abs(p - np.eye(3))) <= 1e-6


def test_wavelet_rows_orthogonal_to_filter_row(meyer2):
    mats, _ = wavelet_matrix(meyer2, random_points(2, 500, seed=9))
    inner = np.einsum("nip,np->ni", mats[:, 1:, :], np.conj(mats[:, 0, :]))
    assert np.max(np.abs(inner)) < 1e-13


def test_completion_deterministic():
    a = meyer_family(2)
    b = meyer_family(2)
    xi = random_points(2, 300, seed=10)
    for ra, rb in zip(a.rows, b.rows):
        assert np.asarray(ra(xi)).tobytes() == np.asarray(rb(xi)).tobytes()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 8))
def test_householder_first_row_and_unitary(seed, r):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(5, r)) + 1j * rng.normal(size=(5, r))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    u = householder_completion(v)
    assert np.allclose(u[:, 0, :], v, atol=1e-14)
    gram = u @ np.conj(np.swapaxes(u, 1, 2))
    assert np.max(np.abs(gram - np.eye(r))) < 1e-13


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 2 * np.pi), st.floats(1e-14, 1e-6))
def test_householder_near_tie(angle, eps):
    v = np.array([[np.exp(1j * angle) * math.sqrt(1 - eps * eps), eps, 0, 0]])
    u = householder_completion(v)
    assert np.max(np.abs(u[0] @ np.conj(u[0].T) - np.eye(4))) < 1e-14


def test_householder_tie_is_identity():
    u = householder_completion(np.array([[1.0, 0.0, 0.0, 0.0]]))
    assert np.array_equal(u[0], np.eye(4))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_symbols_periodic_and_symmetric(seed):
    fam = meyer_family(2)
    rng = np.random.default_rng(seed)
    xi = rng.uniform(0, 2 * np.pi, size=(6, 2))
    shift = 2 * np.pi * rng.integers(-3, 4, size=(6, 2))
    for beta in fam.betas:
        base = beta(xi)
        assert np.allclose(beta(xi + shift), base, atol=1e-10)
        assert np.allclose(beta(xi[:, ::-1]), base, atol=1e-10)


def test_support_panels_n2():
    # supports of H psi^i(2 xi) inside [-pi, pi)^2, sampled on a midpoint grid
    fam = shannon_family(2)
    t = (np.arange(8) + 0.5) * np.pi / 4 - np.pi
    xi = np.stack(np.meshgrid(t, t, indexing="ij"), axis=-1).reshape(-1, 2)
    central = np.all(np.abs(xi) < np.pi / 2, axis=-1)
    edge1 = np.abs(xi[:, 0]) < np.pi / 2
    edge2 = np.abs(xi[:, 1]) < np.pi / 2
    assert np.array_equal(np.abs(fam.phi(2 * xi)) > 0, central)
    expected = [edge1 & ~edge2, ~edge1 & edge2, ~edge1 & ~edge2]
    for prof, mask in zip(fam.profiles, expected):
        assert np.array_equal(np.abs(prof(2 * xi)) > 0, mask)


# classical transfer

def test_classical_shannon_gives_radial_shannon():
    phi = classical_to_radial(classical_shannon_hat(2), 2, support_radius=np.pi)
    xi = random_points(2, 300, low=-4, high=4)
    assert np.max(np.abs(phi(xi) - shannon_scaling(2)(xi))) < 1e-14


def test_classical_meyer_riesz_bounds():
    # the classical tensor Meyer profile is orthonormal, so A = B = 1
    phi = meyer_scaling(2)
    assert abs(phi.riesz_A - 1) < 1e-12 and abs(phi.riesz_B - 1) < 1e-12
    t = np.linspace(-np.pi, np.pi, 101)
    s = sum(meyer_hat(t + 2 * np.pi * k) ** 2 for k in range(-2, 3))
    assert np.allclose(s, 1 / (2 * np.pi), atol=1e-15)


def test_classical_literal_normalization():
    phi = classical_to_radial(tensor_meyer_hat(2), 2, "literal", 4 * np.pi / 3)
    assert abs(phi.riesz_A - 0.5) < 1e-12


def test_classical_rejects_non_symmetric():
    def skew(xi):
        xi = np.asarray(xi)
        return np.exp(-xi[..., 0] ** 2 - 2 * xi[..., 1] ** 2)

    with pytest.raises(ValueError):
        classical_to_radial(skew, 2)


# membership and shift non-invariance

def test_membership_symbol_recovers_coefficients():
    phi = meyer_scaling(2)
    coeffs = {Partition((0, 0)): 0.7, Partition((1, 0)): -0.3j, Partition((2, 1)): 0.25}
    xi = random_points(2, 200, seed=11, low=-2.0, high=2.0)
    expected = sum(a * schur_S(lam, xi) for lam, a in coeffs.items())
    got = membership_symbol(phi, coeffs, xi)
    ok = np.isfinite(got) & (np.abs(weyl_denominator(xi)) > 1e-3)
    assert np.max(np.abs(got[ok] - expected[ok])) < 1e-9


def test_shift_noninvariance_meyer():
    flag, residual = shift_noninvariance_check(meyer_scaling(2))
    assert flag and residual > 0.01


def test_shift_noninvariance_orthonormalized_gaussian():
    flag, residual = shift_noninvariance_check(orthonormalize(gaussian_scaling(2)))
    assert flag and residual > 0.01


def test_shift_shannon_space_is_invariant():
    # the Shannon V_0 is a Paley-Wiener space, preserved by multiplication with J
    flag, residual = shift_noninvariance_check(shannon_scaling(2))
    assert not flag and residual < 1e-6


def test_shift_zero_function_vacuous():
    assert shift_noninvariance_check(meyer_scaling(2), coeffs={Partition((0, 0)): 0.0}) == (False, 0.0)


# decomposition

def band_profile(n, b=2.5):
    def prof(xi):
        xi = np.asarray(xi, dtype=float)
        u = np.clip(1 - (xi / b) ** 2, 0, None)
        return np.prod(u**4, axis=-1) * (1 + 0.2 * xi.sum(-1))

    return AnalyticProfile(prof, n, "band", b)


def bump(x):
    r2 = np.sum(x**2, axis=-1) / 16.0
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(r2 < 1, np.exp(-1 / np.maximum(1 - r2, 1e-300)), 0.0)


@pytest.mark.parametrize("n", [2, 3])
def test_decompose_basis_element(n):
    phi = shannon_scaling(n)
    lam0 = Partition((1, 0)) if n == 2 else Partition((2, 1, 0))

    def hf(xi):
        xi = np.asarray(xi, dtype=float)
        return (2 * np.pi) ** (-n / 2) * m_lambda(lam0) * bessel_J(xi, 1j * lam0.shifted()) * phi(xi)

    tree = decompose(AnalyticProfile(hf, n, "e", np.pi), phi, [0], lam_max=3)
    k = tree.parts.index(lam0)
    assert abs(tree.coeffs[0, k] - 1) < 1e-8
    assert np.max(np.abs(np.delete(tree.coeffs[0], k))) < 1e-8


def test_decompose_band_limited_n2():
    tree = decompose(band_profile(2), shannon_scaling(2), (-2, 1), lam_max=4)
    norm = math.sqrt(tree.norm_sq)
    assert tree.residual_norm(0) <= 1e-4 * norm
    assert tree.residual_norm(1) <= 1e-4 * norm
    assert tree.residual_norm(-2) > 0.1 * norm
    assert tree.bessel_ok()


def test_decompose_bump_limits():
    f = RadialFunctionGrid.from_function(bump, default_grid(2))
    tree = decompose(f, shannon_scaling(2), [-8, -4, -2, 0], lam_max=3)
    norms = [tree.projection_norm(j) for j in tree.levels]
    assert norms[0] <= 1e-3 * math.sqrt(tree.norm_sq)
    assert all(a <= b + 1e-12 for a, b in zip(norms, norms[1:]))
    assert tree.bessel_ok()


def test_decompose_bump_energies_grid_independent():
    g = default_grid(2)
    coarse = decompose(RadialFunctionGrid.from_function(bump, g), shannon_scaling(2), [-1, 1], lam_max=3)
    fine_grid = TensorGrid(2, int(2.5 * g.nodes_per_axis), g.radius)
    fine = decompose(RadialFunctionGrid.from_function(bump, fine_grid), shannon_scaling(2), [-1, 1], lam_max=3)
    assert np.allclose(coarse.energies, fine.energies, rtol=1e-4)
    assert np.all(np.diff(coarse.energies) > 0)


def test_decompose_rejects_unresolved_levels():
    f = RadialFunctionGrid.from_function(bump, default_grid(2))
    top = max_resolved_level(f.grid, shannon_scaling(2))
    with pytest.raises(ValueError, match="resolution"):
        decompose(f, shannon_scaling(2), [top + 1], lam_max=2)


def test_decompose_strict_truncation():
    with pytest.raises(TruncationTooSmall):
        decompose(band_profile(2), shannon_scaling(2), [0], lam_max=1, strict=True)


# serialization

@pytest.mark.parametrize("builder", [shannon_family, meyer_family])
def test_json_round_trip(builder):
    samples = sample_family(builder(2), freq_nodes=12, symbol_nodes=12)
    text = to_json(samples)
    back = from_json(text)
    assert back.equals(samples)
    assert to_json(back) == text


def test_json_rejects_unknown_format():
    with pytest.raises(ValueError):
        from_json('{"format": "other"}')
