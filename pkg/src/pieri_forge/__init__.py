"""Exact analytic expansions of Macdonald and Jack polynomials.

The package expands any Macdonald polynomial (and its Jack limit) into
products of one-row symmetric functions: modified complete functions g_k on
one side, elementary functions e_k on the dual side.  Every coefficient is
an exact rational function of the deformation parameters, produced by
closed-form single-step coefficients and their iterated products, and every
expansion can be certified against an independent Gram-Schmidt oracle.
"""

from ._rat import BACKEND as COEFF_BACKEND
from .errors import ContextError, DomainError, PieriForgeError, SpecializationError
from .expand import (
    MODES,
    DiscardRecord,
    Expansion,
    ExpTerm,
    expand_P_step,
    expand_Q_step,
    expand_full,
    jack_step,
    mode_ctx,
    products_to_symfun,
)
from .inverse import c_ab, c_alpha, orthogonality_check, orthogonality_sweep
from .kernel import BACKEND as KERNEL_BACKEND
from .oracle import (
    Oracle,
    Q_from_P,
    VerificationReport,
    degeneration_checks,
    gram_schmidt_P,
    oracle,
    verify_expansion,
)
from .partitions import (
    LTMatrix,
    Partition,
    dominance_leq,
    enum_box,
    enum_ltm,
    partitions_of,
    partitions_upto,
)
from .pieri import PieriExpansion, d_coeff, pieri_expand, pieri_u
from .ratfun import (
    ALPHA,
    QT,
    FieldCtx,
    LaurentPoly,
    RatFun,
    det,
    pochhammer,
    qt_with_symbols,
    raising_factorial,
    substitute,
    vandermonde,
)
from .symfunc import SymFun, omega_qt, scalar

__version__ = "0.1.0"

__all__ = [
    "ALPHA",
    "COEFF_BACKEND",
    "ContextError",
    "DiscardRecord",
    "DomainError",
    "ExpTerm",
    "Expansion",
    "FieldCtx",
    "KERNEL_BACKEND",
    "LTMatrix",
    "LaurentPoly",
    "MODES",
    "Oracle",
    "Partition",
    "PieriExpansion",
    "PieriForgeError",
    "QT",
    "Q_from_P",
    "RatFun",
    "SpecializationError",
    "SymFun",
    "VerificationReport",
    "__version__",
    "c_ab",
    "c_alpha",
    "d_coeff",
    "degeneration_checks",
    "det",
    "dominance_leq",
    "enum_box",
    "enum_ltm",
    "expand_P_step",
    "expand_Q_step",
    "expand_full",
    "gram_schmidt_P",
    "jack_step",
    "mode_ctx",
    "omega_qt",
    "oracle",
    "orthogonality_check",
    "orthogonality_sweep",
    "partitions_of",
    "partitions_upto",
    "pieri_expand",
    "pieri_u",
    "pochhammer",
    "products_to_symfun",
    "qt_with_symbols",
    "raising_factorial",
    "scalar",
    "substitute",
    "vandermonde",
]
