"""Weighted Bergman space lab: weights, Carleson measures and Toeplitz operators."""

from ._core import (
    AccuracyError,
    ConfigError,
    DomainError,
    Error,
    Function,
    Lattice,
    Measure,
    ParameterError,
    Weight,
    bergman_constant,
    bergman_distance,
    bergman_norm,
    carleson_sup,
    embedding_norm,
    fusion_weight,
    generate_lattice,
    inner_product,
    kernel_atom,
    kernel_coefficients,
    kernel_eval,
    khinchin_check,
    lambda_norm,
    m0_sup,
    mobius,
    mu_hat_norm,
    phi_norm,
    psi_norm,
    region_weight_disk,
    region_weight_square,
    run_experiment,
    normalize_scenario,
    sigma_weight,
    toeplitz_apply,
    toeplitz_matrix,
    toeplitz_norm_estimate,
    toeplitz_norm_exact,
    vanishing_profile,
    verify_lattice,
)

__all__ = [name for name in dir() if not name.startswith("_")]
