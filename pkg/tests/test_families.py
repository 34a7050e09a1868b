import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_cubature.charpoly import q_via_determinant
from toeplitz_cubature.families import (gen_chebyshev_U, gen_P, gen_Q, lemma41_expand,
                                        qac_coeffs, rank_conditions, real_basis_matrix,
                                        scale_cor36, to_real_basis)
from toeplitz_cubature.poly import BivarPoly, conj_reflect, poly_eval, vee
from toeplitz_cubature.scalars import GaussRational

from conftest import P, PARAM_SET, nonzero_gauss


@settings(max_examples=15)
@given(nonzero_gauss, nonzero_gauss)
def test_recurrence_matches_determinants(a, c):
    Q, _ = gen_Q(4, a, c)
    for m in range(5):
        for k in range(m + 1):
            assert Q.get(m, k) == q_via_determinant(m, k, a, c)


@settings(max_examples=15)
@given(nonzero_gauss, nonzero_gauss)
def test_expansion_in_P_family(a, c):
    Q, _ = gen_Q(7, a, c)
    Pf = gen_P(7, c)
    for m in range(8):
        for k in range(m + 1):
            assert lemma41_expand(m, k, a, c, Pf) == Q.get(m, k)


@pytest.mark.parametrize("a, c", PARAM_SET)
def test_reflection_in_family(a, c):
    Q, _ = gen_Q(6, P(a), P(c))
    for m in range(7):
        for k in range(m + 1):
            assert conj_reflect(Q.get(m, k)) == Q.get(m, m - k)


def test_small_family_values():
    Q, _ = gen_Q(2, P("3/2"), P("1"))
    z, zb = BivarPoly.z(), BivarPoly.zbar()
    assert Q.get(1, 0) == z and Q.get(1, 1) == zb
    # Q_0^2 = z^2 - a zbar, Q_1^2 = z zbar - |a|^2
    assert Q.get(2, 0) == z * z - zb.scale(P("3/2"))
    assert Q.get(2, 1) == z * zb - BivarPoly.const(P("9/4"))
    assert Q.get(1, 3).is_zero() and Q.get(2, -1).is_zero()


def test_float_family_close_to_exact():
    Qe, _ = gen_Q(5, P("3/2"), P("1+i"))
    Qf, _ = gen_Q(5, 1.5, 1 + 1j)
    for m in range(6):
        for k in range(m + 1):
            assert Qf.get(m, k).allclose(Qe.get(m, k).to_float(), 1e-12)


def test_coefficient_norms_constant():
    a, c = P("3/2"), P("1")
    norms = set()
    for n in range(3, 21):
        tc = qac_coeffs(n, a, c)
        norms.add((max(abs(v) for v in tc.alpha.flat), max(abs(v) for v in tc.beta.flat)))
    assert len(norms) == 1


@pytest.mark.parametrize("a, c", PARAM_SET)
def test_commutation_condition(a, c):
    a, c = P(a), P(c)
    for n in range(1, 8):
        al, g = qac_coeffs(n - 1, a, c).alpha, qac_coeffs(n, a, c).gamma
        lhs, rhs = al @ vee(g), vee(al) @ g
        assert all(x == y for x, y in zip(lhs.flat, rhs.flat))


def test_chebyshev_reduction():
    U = gen_chebyshev_U(8)
    S = scale_cor36(gen_P(8, P("1")), P("1"))
    for m in range(9):
        for k in range(m + 1):
            assert S.get(m, k) == U.get(m, k)


def test_chebyshev_scaling_complex():
    a = P("1+i")
    c = a.conjugate() ** 3 / (a * a.conjugate())
    assert c == P("-1-i")
    U = gen_chebyshev_U(6)
    S = scale_cor36(gen_P(6, c), a)
    assert all(S.get(m, k) == U.get(m, k) for m in range(7) for k in range(m + 1))
    with pytest.raises(ValueError):
        scale_cor36(gen_P(3, P("1")), a)


def test_chebyshev_low_degree():
    U = gen_chebyshev_U(2)
    z = BivarPoly.z()
    assert U.get(1, 0) == z.scale(3)
    assert U.get(2, 1) == (z * BivarPoly.zbar()).scale(9) - BivarPoly.const(1)


@pytest.mark.parametrize("n", range(0, 7))
def test_real_basis_unitary(n):
    S = real_basis_matrix(n)
    np.testing.assert_allclose(S @ S.conj().T, np.eye(n + 1), atol=1e-15)


@given(st.integers(0, 6), st.integers(0, 10**6))
def test_to_real_basis_gives_real_values(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    v = (v + np.conj(v[::-1])) / 2
    out = to_real_basis(v, n)
    np.testing.assert_allclose(real_basis_matrix(n).conj().T @ out, v, atol=1e-12)


def test_to_real_basis_n1_example():
    v = np.array([1 + 2j, 1 - 2j])
    np.testing.assert_allclose(to_real_basis(v, 1), [np.sqrt(2), -2 * np.sqrt(2)])
    with pytest.raises(ValueError):
        to_real_basis(np.array([1 + 2j, 1 + 2j]), 1)


def test_rank_conditions_for_family():
    tc = qac_coeffs(4, P("3/2"), P("1"))
    info = rank_conditions(tc.alpha, tc.gamma)
    # real-form blocks have full row rank n+1 and the stacked pair rank n+2
    assert info["alpha_plus"] == info["alpha_minus"] == 5
    assert info["alpha_stack"] == 6
    assert info["gamma_stack"] == 4
