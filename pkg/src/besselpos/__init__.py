"""Positivity of Bessel integrals, hypergeometric kernels and Buhmann's
compactly supported radial basis functions."""
from .estimator import BuhmannRBFInterpolator
from .exceptions import (
    BesselPosError,
    ConvergenceError,
    DomainError,
    MissingParameterError,
    NotPositiveDefiniteError,
    PoleError,
    PrecisionLossError,
)
from .integrals import (
    SCAN_DEFAULTS,
    KernelKind,
    PositivityVerdict,
    QuadResult,
    VerdictKind,
    alpha_star,
    bessel_second_zero,
    closed_form_result,
    integral_closed,
    integral_direct,
    kernel_value,
    scan_positivity,
)
from .rbf import (
    PointSet,
    RbfSpec,
    SpecialKind,
    certify_spec,
    cholesky_pivots,
    evaluate_interpolant,
    fit_interpolant,
    gram,
    is_positive_definite,
    special_spec,
    special_w,
    special_w_hat,
    w_hat,
    w_hat_result,
    w_value,
    w_values,
)
from .regions import (
    IntegralParams,
    RegionId,
    Thm3Class,
    certifying_region,
    corollary1_contains,
    fuzzy_contains,
    integral_region_contains,
    newton_contains,
    onef2_necessity,
    rbf_region_contains,
    thm3_classify,
)
from .sos import (
    CoeffMethod,
    OmegaMethod,
    OmegaParams,
    TruncationWarning,
    boundary_g7,
    coeff_A,
    coeff_C,
    coeff_C_boundary,
    g7_coefficients,
    is_saalschutzian,
    nu_saalschutz,
    omega_value,
)
from .special import (
    EvalResult,
    OneF2Params,
    TwoF3Params,
    asymptotic_1f2,
    beta_fn,
    bessel_j,
    gamma_fn,
    hyper_0f1,
    hyper_1f2,
    hyper_2f3,
    hyper_pfq,
    normalized_bessel,
    pochhammer,
    terminating_hyper_unit,
)

__version__ = "0.1.0"

__all__ = [
    "BuhmannRBFInterpolator",
    "BesselPosError",
    "ConvergenceError",
    "DomainError",
    "MissingParameterError",
    "NotPositiveDefiniteError",
    "PoleError",
    "PrecisionLossError",
    "SCAN_DEFAULTS",
    "KernelKind",
    "PositivityVerdict",
    "QuadResult",
    "VerdictKind",
    "alpha_star",
    "bessel_second_zero",
    "closed_form_result",
    "integral_closed",
    "integral_direct",
    "kernel_value",
    "scan_positivity",
    "PointSet",
    "RbfSpec",
    "SpecialKind",
    "certify_spec",
    "cholesky_pivots",
    "evaluate_interpolant",
    "fit_interpolant",
    "gram",
    "is_positive_definite",
    "special_spec",
    "special_w",
    "special_w_hat",
    "w_hat",
    "w_hat_result",
    "w_value",
    "w_values",
    "IntegralParams",
    "RegionId",
    "Thm3Class",
    "certifying_region",
    "corollary1_contains",
    "fuzzy_contains",
    "integral_region_contains",
    "newton_contains",
    "onef2_necessity",
    "rbf_region_contains",
    "thm3_classify",
    "CoeffMethod",
    "OmegaMethod",
    "OmegaParams",
    "TruncationWarning",
    "boundary_g7",
    "coeff_A",
    "coeff_C",
    "coeff_C_boundary",
    "g7_coefficients",
    "is_saalschutzian",
    "nu_saalschutz",
    "omega_value",
    "EvalResult",
    "OneF2Params",
    "TwoF3Params",
    "asymptotic_1f2",
    "beta_fn",
    "bessel_j",
    "gamma_fn",
    "hyper_0f1",
    "hyper_1f2",
    "hyper_2f3",
    "hyper_pfq",
    "normalized_bessel",
    "pochhammer",
    "terminating_hyper_unit",
]
