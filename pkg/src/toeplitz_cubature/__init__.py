"""Bivariate orthogonal polynomials from Toeplitz centrohermitian pencils.

The ``Q(a, c)`` family is generated by a three-term recurrence, checked
against determinants of the pencil, and used to build Gaussian cubature
rules of degree ``2m - 1`` with ``m(m+1)/2`` nodes.
"""

from .charpoly import (CharPencil, build_pencil_aac, centrohermitian_toeplitz, charpoly_I,
                       check_reflection, eval_charpoly_I, q_via_determinant, unit_shift)
from .cubature import (CubatureError, CubatureRule, JacobiPair, RegimeError, Tolerances,
                       build_jacobi, build_rule, common_zeros, orthonormalize,
                       verify_exactness, weights)
from .estimators import GaussianCubature, OrthonormalBasis
from .families import (PolyFamily, ThreeTermCoeffs, gen_chebyshev_U, gen_P, gen_Q,
                       lemma41_expand, qac_coeffs, scale_cor36)
from .moments import (GramSequence, MomentTable, ParamRegime, gamma_consistency, gram_closed,
                      gram_from_moments, moment_table, monomial_moment, param_classify,
                      posdef_probe)
from .poly import BivarPoly, conj_reflect, vee
from .scalars import GaussRational, ModeError, parse_complex

__version__ = "0.1.0"

__all__ = [
    "BivarPoly", "CharPencil", "CubatureError", "CubatureRule", "GaussRational",
    "GaussianCubature", "GramSequence", "JacobiPair", "ModeError", "MomentTable",
    "OrthonormalBasis", "ParamRegime", "PolyFamily", "RegimeError", "ThreeTermCoeffs",
    "Tolerances", "build_jacobi", "build_pencil_aac", "build_rule", "centrohermitian_toeplitz",
    "charpoly_I", "check_reflection", "common_zeros", "conj_reflect", "eval_charpoly_I",
    "gamma_consistency", "gen_P", "gen_Q", "gen_chebyshev_U", "gram_closed",
    "gram_from_moments", "lemma41_expand", "moment_table", "monomial_moment",
    "orthonormalize", "param_classify", "parse_complex", "posdef_probe", "q_via_determinant",
    "qac_coeffs", "scale_cor36", "unit_shift", "vee", "verify_exactness", "weights",
]
