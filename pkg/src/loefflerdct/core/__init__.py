"""Exact-arithmetic core: dyadic scalars, rational matrices and the
parametrized Loeffler constructions."""

from .dyadic import Dyadic, NotDyadic
from .loeffler import (
    TRIVIAL_SET,
    GramSummary,
    NotOrthonormalizable,
    ParamVector,
    block_determinants,
    build_bcd,
    compose_bcd,
    build_butterfly,
    build_exact_dct,
    build_loeffler_dct,
    build_M,
    build_M_real,
    build_permutation,
    build_T,
    build_T_real,
    deviation_closed_form,
    deviation_from_diagonality,
    gram_summary,
    gram_template,
    inverse_params,
    inverse_T,
    inverse_T_real,
    invert_params,
    invert_params_real,
    invertibility,
    is_near_orthogonal,
    is_orthogonal,
    loeffler_alpha,
    orthonormalize,
    orthonormalize_matrix,
)
from .matrix import ExactMatrix, ShapeMismatch, SingularMatrix, format_matrix, parse_matrix
