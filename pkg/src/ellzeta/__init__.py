"""ellzeta: elliptic zeta values, divisor q-series, the elliptic gamma
function, and a verification harness for the identities tying them
together."""

from .core import (
    ApproxValue,
    BranchError,
    DEFAULT_POLICY,
    DomainError,
    PoleError,
    PrecisionPolicy,
    TruncationError,
    em_power_tail,
    euler_gamma_const,
    power_tail_bound,
    qseries_tail_bound,
    zeta_int,
)
from .divisor import (
    NomePoint,
    UpperHalfPoint,
    d_k,
    eisenstein_lattice,
    gk_qexp,
    sigma_power,
    theta0,
)
from .zeta import (
    ExtendedPair,
    HomogeneousTriple,
    WedgePair,
    anomaly_a,
    epsilon_pair,
    epsilon_sign,
    lipschitz_both_sides,
    z_k,
    z_k_even_split,
    z_k_extended,
    z_k_homogeneous,
    z_k_lattice,
    z_k_odd_split,
)
from .gamma import (
    CubicFit,
    GammaArg,
    TaylorSlice,
    ell_gamma,
    euler_gamma_fn,
    fit_Q_cubic,
    log_ell_gamma_sum,
    log_euler_gamma_series,
    scl_limit_probe,
    taylor_z_extraction,
    three_term_product_residual,
)
from .harness import (
    GeneratorWord,
    IntegerMatrix3,
    ResidualReport,
    STANDARD_SIGMA,
    STANDARD_TAU,
    check_prop1_forward,
    check_three_term_additive,
    check_three_term_modular,
    cocycle_eval,
    limit_euler_gamma_probe,
    limit_zeta_probe,
    word_to_matrix,
)

__all__ = [
    "ApproxValue",
    "BranchError",
    "DEFAULT_POLICY",
    "DomainError",
    "PoleError",
    "PrecisionPolicy",
    "TruncationError",
    "em_power_tail",
    "euler_gamma_const",
    "power_tail_bound",
    "qseries_tail_bound",
    "zeta_int",
    "NomePoint",
    "UpperHalfPoint",
    "d_k",
    "eisenstein_lattice",
    "gk_qexp",
    "sigma_power",
    "theta0",
    "ExtendedPair",
    "HomogeneousTriple",
    "WedgePair",
    "anomaly_a",
    "epsilon_pair",
    "epsilon_sign",
    "lipschitz_both_sides",
    "z_k",
    "z_k_even_split",
    "z_k_extended",
    "z_k_homogeneous",
    "z_k_lattice",
    "z_k_odd_split",
    "CubicFit",
    "GammaArg",
    "TaylorSlice",
    "ell_gamma",
    "euler_gamma_fn",
    "fit_Q_cubic",
    "log_ell_gamma_sum",
    "log_euler_gamma_series",
    "scl_limit_probe",
    "taylor_z_extraction",
    "three_term_product_residual",
    "GeneratorWord",
    "IntegerMatrix3",
    "ResidualReport",
    "STANDARD_SIGMA",
    "STANDARD_TAU",
    "check_prop1_forward",
    "check_three_term_additive",
    "check_three_term_modular",
    "cocycle_eval",
    "limit_euler_gamma_probe",
    "limit_zeta_probe",
    "word_to_matrix",
    "__version__",
]

__version__ = "0.1.0"
