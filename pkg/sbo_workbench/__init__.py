"""SBO Workbench - exact construction and verification of differential
symmetry-breaking operators for the pair (GL_{n+1}, GL_n)."""

from .constants import (
    CHECK_ANCHORS,
    EXIT_CODES,
    SUITES,
    SUPPORTED_SIZES,
)

from .exact_algebra import (
    AffineForm,
    as_rational,
    eval_at,
    lambda_forms,
    nu_forms,
    parameter_field,
    pochhammer,
    random_points,
)

from .weyl_algebra import (
    WeylElement,
    build_D,
    build_F,
    build_L,
    build_power,
    epsilon,
    residue_operator,
)

from .covariant_functions import (
    FunctionCombination,
    apply_weyl,
    catalogue,
    kernel_K,
    restrict_k,
    restrict_operator,
)

from .parameters import (
    ClassificationResult,
    InductionParams,
    classify_generic,
    is_generic,
    multiplicity_two_params,
    restriction_params,
)

from .gamma_calculus import (
    GammaExpr,
    WeylWord,
    c_function,
    canonicalize,
    gamma_normalizer,
    gamma_ratio,
    residue_scalar_check,
    simple_c_function,
    transpose_scalar,
)

from .epsilon_algebra import (
    NormalFormExpansion,
    expand_rest1_FD,
)

from .delta_model import (
    DeltaKernel,
    KernelSpace,
    PdeOperator,
    closed_form_basis,
    derive_system,
    predicted_dimension,
    solve_kernels,
)

from .numeric import (
    gamma_numeric,
    riesz_residue_probe,
)

from .schemas import (
    CheckResult,
    CheckStatus,
    Mode,
    OutputFormat,
    RunConfig,
    SuiteReport,
)

from .config import WorkbenchSettings, load_settings
from .verifier import run_suite

__version__ = "0.1.0"

__all__ = [
    # Constants
    "CHECK_ANCHORS",
    "EXIT_CODES",
    "SUITES",
    "SUPPORTED_SIZES",

    # Exact algebra
    "AffineForm",
    "as_rational",
    "eval_at",
    "lambda_forms",
    "nu_forms",
    "parameter_field",
    "pochhammer",
    "random_points",

    # Operators
    "WeylElement",
    "build_D",
    "build_F",
    "build_L",
    "build_power",
    "epsilon",
    "residue_operator",

    # Covariant functions
    "FunctionCombination",
    "apply_weyl",
    "catalogue",
    "kernel_K",
    "restrict_k",
    "restrict_operator",

    # Parameters
    "ClassificationResult",
    "InductionParams",
    "classify_generic",
    "is_generic",
    "multiplicity_two_params",
    "restriction_params",

    # Gamma calculus
    "GammaExpr",
    "WeylWord",
    "c_function",
    "canonicalize",
    "gamma_normalizer",
    "gamma_ratio",
    "residue_scalar_check",
    "simple_c_function",
    "transpose_scalar",

    # n = 2 models
    "NormalFormExpansion",
    "expand_rest1_FD",
    "DeltaKernel",
    "KernelSpace",
    "PdeOperator",
    "closed_form_basis",
    "derive_system",
    "predicted_dimension",
    "solve_kernels",

    # Numeric probes
    "gamma_numeric",
    "riesz_residue_probe",

    # Reports and configuration
    "CheckResult",
    "CheckStatus",
    "Mode",
    "OutputFormat",
    "RunConfig",
    "SuiteReport",
    "WorkbenchSettings",
    "load_settings",
    "run_suite",
]
