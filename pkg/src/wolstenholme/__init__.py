"""Exact verification of Wolstenholme-type congruences via multiple harmonic sums."""

from .arith import (
    IntegerMatrix,
    PadicResidue,
    Poly,
    int_binomial,
    integer_matrix_solve,
    mod_inverse,
    padic_reduce,
    padic_valuation,
    poly_crt,
)
from .bernoulli import bernoulli_exact, bernoulli_mod_p, bernoulli_via_mhs, is_exceptional_bernoulli
from .congruence import (
    CongruenceReport,
    CongruenceSpec,
    ExceptionalClass,
    binom_kp_mod,
    classify_exceptional,
    error_term,
    uniqueness_search,
    verify_general,
    verify_named,
    verify_optimized,
)
from .extremal import (
    WolstenholmeData,
    coefficients_from_data,
    extension_pair,
    extremal_coefficients,
    extremal_poly_crt,
    extremal_polys_matrix,
    matrix_Mnb_det,
    optimal_data,
)
from .mhs import (
    Composition,
    binomial_via_lehmer,
    elem_mhs_exact,
    elem_mhs_mod,
    f_poly,
    mhs_exact,
    rep0_residual,
)

__version__ = "0.1.0"

__all__ = [
    "IntegerMatrix",
    "PadicResidue",
    "Poly",
    "int_binomial",
    "integer_matrix_solve",
    "mod_inverse",
    "padic_reduce",
    "padic_valuation",
    "poly_crt",
    "bernoulli_exact",
    "bernoulli_mod_p",
    "bernoulli_via_mhs",
    "is_exceptional_bernoulli",
    "CongruenceReport",
    "CongruenceSpec",
    "ExceptionalClass",
    "binom_kp_mod",
    "classify_exceptional",
    "error_term",
    "uniqueness_search",
    "verify_general",
    "verify_named",
    "verify_optimized",
    "WolstenholmeData",
    "coefficients_from_data",
    "extension_pair",
    "extremal_coefficients",
    "extremal_poly_crt",
    "extremal_polys_matrix",
    "matrix_Mnb_det",
    "optimal_data",
    "Composition",
    "binomial_via_lehmer",
    "elem_mhs_exact",
    "elem_mhs_mod",
    "f_poly",
    "mhs_exact",
    "rep0_residual",
]
