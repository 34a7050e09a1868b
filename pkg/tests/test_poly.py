from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from toeplitz_cubature.poly import (BivarPoly, conj_reflect, exchange, is_centrohermitian,
                                    poly_eval, vee)
from toeplitz_cubature.scalars import GaussRational

from conftest import gauss

monomial = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monomial, gauss, max_size=5).map(lambda d: BivarPoly(d, exact=True))
points = st.builds(GaussRational, st.fractions(-2, 2, max_denominator=4),
                   st.fractions(-2, 2, max_denominator=4))


@given(polys, polys, polys)
def test_ring_laws(p, q, r):
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == BivarPoly.zero()


@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(p, q, z):
    assert poly_eval(p * q, z) == poly_eval(p, z) * poly_eval(q, z)
    assert poly_eval(p + q, z) == poly_eval(p, z) + poly_eval(q, z)


@given(polys, polys, points)
def test_conj_reflect(p, q, z):
    assert conj_reflect(conj_reflect(p)) == p
    assert conj_reflect(p * q) == conj_reflect(p) * conj_reflect(q)
    assert poly_eval(conj_reflect(p), z) == poly_eval(p, z).conjugate()


@given(polys)
def test_float_view_matches(p):
    z = 0.3 - 0.7j
    assert abs(poly_eval(p.to_float(), z) - complex(poly_eval(p, GaussRational(Fraction(3, 10), Fraction(-7, 10))))) \
        <= 1e-12 * max(1.0, p.max_abs_coeff() * 10)


def test_degree_and_zero():
    assert BivarPoly.zero().degree == -1
    assert BivarPoly.zero().is_zero()
    p = BivarPoly({(2, 1): 1, (0, 0): 3})
    assert p.degree == 3
    assert p.coeff(2, 1) == 1 and p.coeff(1, 1) == 0


def test_float_pruning():
    p = BivarPoly({(0, 0): 1.0, (1, 0): 1e-20}, exact=False)
    assert p.coeffs == {(0, 0): 1.0}


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        BivarPoly({(-1, 0): 1})


def test_numpy_evaluation():
    p = BivarPoly.z() * BivarPoly.zbar()
    z = np.array([1 + 1j, 2.0])
    np.testing.assert_allclose(poly_eval(p, z), [2.0, 4.0])


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10**6))
def test_vee_is_an_involution(r, c, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))
    np.testing.assert_array_equal(vee(vee(M)), M)
    np.testing.assert_allclose(vee(M), exchange(r) @ M.conj() @ exchange(c))
    assert is_centrohermitian(M + vee(M), 1e-14)


def test_exchange_exact():
    J = exchange(3, exact=True)
    assert J[0, 2] == 1 and J[1, 1] == 1 and J[0, 0] == 0
