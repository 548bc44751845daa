"""Radial multiresolution analysis: scaling functions, filters, wavelets, decomposition."""
from .decomposition import CoefficientTree, TruncationTooSmall, decompose, frequency_norm, max_resolved_level
from .families import (
    NORMALIZATIONS,
    ShannonCalibration,
    calibrate_shannon,
    classical_shannon_hat,
    classical_to_radial,
    cube_indicator,
    gaussian_scaling,
    meyer_family,
    meyer_filter,
    meyer_hat,
    meyer_m0,
    meyer_scaling,
    q_indicator,
    shannon_family,
    shannon_filter,
    shannon_gamma,
    shannon_kappa,
    shannon_scaling,
    tensor_meyer_hat,
)
from .filters import (
    POLE_TOL,
    FilterFunction,
    QMFError,
    WaveletFamily,
    cross_periodization_matrix,
    delta_ratio,
    inverse_delta_ratio,
    householder_completion,
    near_pole,
    qmf_check,
    unitarity_deviation,
    wavelet_construct,
    wavelet_matrix,
)
from .periodic import (
    R_LATTICE,
    PeriodicSymmetricFunction,
    SlowDecayError,
    lattice_sum,
    reduce_mod,
    torus_nodes,
    torus_volume,
)
from .scaling import (
    RieszBasisError,
    ScalingFunction,
    TwoScaleResult,
    cell_rule,
    cross_periodization,
    direct_gram,
    gram_matrix,
    membership_symbol,
    orthonormalize,
    panel_rule,
    periodization,
    riesz_bounds,
    shift_noninvariance_check,
    torus_gram,
    two_scale_check,
    two_scale_coefficients,
    two_scale_constant,
)
from .serialize import FamilySamples, from_json, sample_family, to_json
