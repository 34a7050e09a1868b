"""scikit-learn style wrappers around rule construction and the orthonormal basis."""

from __future__ import annotations

from fractions import Fraction
from numbers import Integral

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .cubature import Tolerances, build_jacobi, build_rule, orthonormalize
from .families import gen_Q, qac_coeffs, real_basis_matrix
from .moments import gram_recursive
from .poly import poly_eval
from .scalars import GaussRational, parse_complex

__all__ = ["GaussianCubature", "OrthonormalBasis", "coerce_param"]


def coerce_param(v):
    """Strings, ints and Fractions become exact; floats and complex stay float."""
    if isinstance(v, str):
        return parse_complex(v, exact=True)
    if isinstance(v, (GaussRational, Fraction, Integral)):
        return GaussRational(v) if not isinstance(v, GaussRational) else v
    if isinstance(v, (float, complex, np.floating, np.complexfloating)):
        return complex(v)
    raise TypeError(f"unsupported parameter type {type(v).__name__}")


def _check_m(m):
    if not isinstance(m, Integral) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")


class GaussianCubature(BaseEstimator):
    """Gaussian cubature rule of degree ``2m - 1`` for the ``(a, c)`` functional.

    Parameters
    ----------
    m : int, default=4
        The rule has ``m(m+1)/2`` nodes.
    a, c : str or number, default="1"
        Pencil parameters. Strings such as ``"3/2"`` or ``"1+i"`` are parsed
        exactly.
    check : bool, default=True
        Certify exactness and the Christoffel weights during ``fit``.

    Attributes
    ----------
    nodes_ : ndarray of shape (n_nodes, 2)
    weights_ : ndarray of shape (n_nodes,)
    diagnostics_ : dict
    rule_ : CubatureRule
    """

    def __init__(self, m=4, a="1", c="1", check=True):
        self.m = m
        self.a = a
        self.c = c
        self.check = check

    def fit(self, X=None, y=None):
        """Build the rule. ``X`` and ``y`` are ignored."""
        _check_m(self.m)
        rule = build_rule(self.m, coerce_param(self.a), coerce_param(self.c), check=self.check)
        self.rule_ = rule
        self.nodes_ = rule.nodes
        self.weights_ = rule.weights
        self.diagnostics_ = rule.diagnostics
        self.n_nodes_ = len(rule.weights)
        return self

    def integrate(self, f):
        """Apply the rule to a vectorized ``f(x, y)``."""
        check_is_fitted(self, "rule_")
        return self.rule_.integrate(f)


class OrthonormalBasis(TransformerMixin, BaseEstimator):
    """Map points ``(x, y)`` to the real orthonormal polynomials of degree ``< m``.

    Column block ``n`` holds ``S_n H_n^{-1/2} Q_n(x + iy)``, which is real
    for real points. Under the fitted functional the columns are orthonormal.
    """

    def __init__(self, m=4, a="1", c="1"):
        self.m = m
        self.a = a
        self.c = c

    def fit(self, X=None, y=None):
        _check_m(self.m)
        a, c = coerce_param(self.a), coerce_param(self.c)
        coeffs = [qac_coeffs(n, a, c) for n in range(self.m + 2)]
        grams, _ = gram_recursive(self.m + 1, coeffs)
        self.orth_ = orthonormalize(coeffs[: self.m + 1], grams, Tolerances())
        family, _ = gen_Q(self.m, a, c)
        self.family_ = family
        self.n_features_out_ = self.m * (self.m + 1) // 2
        return self

    def transform(self, X):
        check_is_fitted(self, "orth_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected 2 columns (x, y), got {X.shape[1]}")
        z = X[:, 0] + 1j * X[:, 1]
        blocks = []
        for n in range(self.m):
            vals = np.array([poly_eval(self.family_.get(n, k).to_float(), z) for k in range(n + 1)])
            vals = vals.reshape(n + 1, -1)
            blocks.append((real_basis_matrix(n) @ self.orth_.inv_sqrt_H[n] @ vals).real)
        return np.vstack(blocks).T

    def jacobi(self):
        """The fitted :class:`JacobiPair`."""
        check_is_fitted(self, "orth_")
        return build_jacobi(self.m, self.orth_)
