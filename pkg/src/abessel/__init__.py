"""Exact associated Bessel functions, their ladder structure and generating functions."""

from .algebra import ExpLaurent, LaurentPoly, TSeries, half
from .core import (
    AssocBessel,
    FamilyParams,
    ModeIndex,
    gen_bessel_poly,
    laguerre,
    laguerre_form,
    leading_term,
    norm_sq_coeff,
    reflection_check,
    rodrigues,
    rodrigues_poly,
    sign_coeff,
    valid_indices,
    validate_index,
    y_poly,
)
from .genfun import GenFunKind, closed_form, compare, series_from_family
from .operators import (
    annihilation_check,
    apply_gen_ode,
    apply_ode,
    eigen_calE,
    eigen_E,
    laddering_check,
    ladder_l_apply,
    ladder_m_apply,
    shape_invariance_check,
)
from .orthogonality import gram_matrix, inner_product, moment, norm_formula

__version__ = "0.1.0"
