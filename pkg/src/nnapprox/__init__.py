"""Constructive approximation with absolute-value-activation networks."""

from .network import (
    ABS,
    ACTIVATIONS,
    IDENTITY,
    RELU,
    Activation,
    ActivationMismatchError,
    BlockDiagonal,
    Network,
    NetworkError,
    ShapeMismatchError,
    append_layer,
    compose,
    evaluate,
    general_activation,
    identity_chain,
    l1_param_norm,
    network_from_dict,
    network_from_json,
    network_to_dict,
    network_to_json,
    parallel,
    path_matrix,
    path_norm,
    per_layer_l1,
    prepend_layer,
)
from .constructions import (
    MultVariant,
    LITERAL,
    RESCALED,
    build_mon,
    build_mult,
    build_multr,
    build_pairing_layer,
    build_sq,
    count_monomials,
    enumerate_multi_indices,
    fm_ref,
    mon_error_bound,
    mult_error_bound,
    mult_path_row,
    multr_error_bound,
    sq_error_bound,
    sq_path_row,
    tent,
    tent_iter,
)
from .chebyshev import (
    ChebyshevSeries,
    MonomialPolynomial,
    cheb_fit,
    cheb_poly_coeffs,
    cheb_to_monomial,
)
from .approximators import (
    AnalyticTarget,
    MissingCoefficientError,
    build_cheb_net,
    build_power_series_net,
    builtin_target,
    l1_param_budget,
    target_exp_sum,
    target_inv_two_minus_x,
    target_runge,
)
from .entropy import (
    CoverResult,
    EntropyBoundSpec,
    SamplerViolation,
    empirical_covering,
    empirical_vs_bound,
    linear_bound,
    network_bound,
    sample_network,
)
from .regression import (
    Dataset,
    FitDivergence,
    FitReport,
    RegressionConfig,
    fit,
    generate_data,
    lambda_auto,
    oracle_rhs,
    path_norm_grads,
)
from .verify import VerificationReport, verify_mon, verify_mult, verify_multr, verify_sq

__version__ = "0.1.0"
