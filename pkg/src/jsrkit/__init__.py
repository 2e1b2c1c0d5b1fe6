"""jsrkit: certified bounds and exact p-adic computation for joint spectral radii."""

from jsrkit.bounds import (
    JsrConfig,
    JsrInterval,
    barabanov_approx,
    conjugation_search,
    jsr_estimate,
    lower_bound,
    nilpotency_test,
    rota_strang_norm,
    upper_bound,
)
from jsrkit.certificates import (
    ResidualCertificate,
    TheoremReport,
    Verdict,
    check_bg_el,
    check_boca_new,
    check_polbd,
    convex_hull_bound_check,
    near_idempotent_search,
    residual_certificate,
    siegel_combination,
    trace_bound,
    trajectory_return_search,
)
from jsrkit.core import (
    BudgetExceededError,
    ComplexMatrix,
    EigensolverError,
    JsrError,
    MatrixSet,
    NormKind,
    NormSpec,
    Word,
    as_matrix,
    enumerate_products,
    eval_word,
    operator_norm,
    product_set,
    set_norm,
    spectral_radius,
    vector_norm,
)
from jsrkit.ultrametric import (
    BOTTOM,
    PAdicMagnitude,
    PAdicMatrixSet,
    char_poly_exact,
    check_ultra_boca,
    ell_bound,
    max_root_magnitude,
    padic_jsr_exact,
    padic_nilpotency_exact,
    padic_valuation,
    ultrametric_set_norm,
)

__version__ = "0.1.0"

__all__ = [
    "BOTTOM",
    "BudgetExceededError",
    "ComplexMatrix",
    "EigensolverError",
    "JsrConfig",
    "JsrError",
    "JsrInterval",
    "MatrixSet",
    "NormKind",
    "NormSpec",
    "PAdicMagnitude",
    "PAdicMatrixSet",
    "ResidualCertificate",
    "TheoremReport",
    "Verdict",
    "Word",
    "as_matrix",
    "barabanov_approx",
    "char_poly_exact",
    "check_bg_el",
    "check_boca_new",
    "check_polbd",
    "check_ultra_boca",
    "conjugation_search",
    "convex_hull_bound_check",
    "ell_bound",
    "enumerate_products",
    "eval_word",
    "jsr_estimate",
    "lower_bound",
    "max_root_magnitude",
    "near_idempotent_search",
    "nilpotency_test",
    "operator_norm",
    "padic_jsr_exact",
    "padic_nilpotency_exact",
    "padic_valuation",
    "product_set",
    "residual_certificate",
    "rota_strang_norm",
    "set_norm",
    "siegel_combination",
    "spectral_radius",
    "trace_bound",
    "trajectory_return_search",
    "ultrametric_set_norm",
    "upper_bound",
    "vector_norm",
    "__version__",
]
