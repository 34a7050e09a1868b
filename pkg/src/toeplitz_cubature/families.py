"""Polynomial families generated by three-term recurrences.

Three families live here, all stored as triangular tables ``table[m][k]``
(``0 <= k <= m``) of :class:`~toeplitz_cubature.poly.BivarPoly`:

* ``chebyshevU`` -- Chebyshev polynomials of the second kind on the deltoid,
  ``U[n+1][k] = 3 z U[n][k] - U[n][k+1] - U[n-1][k-1]``;
* ``P(c)`` -- characteristic polynomials of the banded Toeplitz pencil;
* ``Q(a, c)`` -- characteristic polynomials of the perturbed pencil.

For the monic families the recurrence reads

    z Q_m = [I | 0] Q_{m+1} + beta_m Q_m + gamma_{m-1} Q_{m-1}

and the coefficients of a component of ``Q_{m+1}`` not determined by it,
the last one, follow from the reflection symmetry
``Q_{m+1}[m+1] = conj_reflect(Q_{m+1}[0])``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .poly import BivarPoly, conj_reflect, vee, zeros_like_mode
from .scalars import GaussRational, as_exact, is_exact, scalar_abs2

__all__ = [
    "PolyFamily",
    "ThreeTermCoeffs",
    "gen_P",
    "gen_Q",
    "gen_chebyshev_U",
    "lemma41_expand",
    "qac_coeffs",
    "rank_conditions",
    "real_basis_matrix",
    "scale_cor36",
    "to_real_basis",
]


def _params(a, c):
    """Return ``(a, c, exact)`` with both scalars in a common mode."""
    if is_exact(a) and is_exact(c):
        return as_exact(a), as_exact(c), True
    return complex(a), complex(c), False


@dataclass(frozen=True)
class ThreeTermCoeffs:
    """Coefficients of ``z Q_m = alpha Q_{m+1} + beta Q_m + gamma Q_{m-1}``.

    Shapes are ``(m+1, m+2)``, ``(m+1, m+1)`` and ``(m+1, m)``. The
    ``zbar`` recurrence uses the ``vee`` transforms of the same matrices.
    """

    degree: int
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    @property
    def alpha_vee(self) -> np.ndarray:
        return vee(self.alpha)

    @property
    def beta_vee(self) -> np.ndarray:
        return vee(self.beta)

    @property
    def gamma_vee(self) -> np.ndarray:
        return vee(self.gamma)


def qac_coeffs(m: int, a, c) -> ThreeTermCoeffs:
    """Recurrence coefficients of degree ``m`` for the ``Q(a, c)`` family.

    For ``m >= 3`` the pattern is: ``alpha = [I | 0]``; ``beta`` has ``c``
    on the superdiagonal and ``conj(c) - conj(a)`` at ``(m, m-2)``;
    ``gamma`` has ``c (c - a)`` at ``(0, 2)`` and ``|c|**2`` on the
    subdiagonal band. Degrees 1 and 2 are the boundary cases fixed by the
    determinants themselves:

    * ``m = 1``: ``beta = [[0, a], [0, 0]]``, ``gamma = [[0], [|a|**2]]``;
    * ``m = 2``: ``gamma`` carries ``|c|**2 - |a - c|**2`` on its band.
    """
    if m < 0:
        raise ValueError("degree must be >= 0")
    a, c, exact = _params(a, c)
    one = GaussRational(1) if exact else 1.0
    alpha = zeros_like_mode((m + 1, m + 2), exact)
    for i in range(m + 1):
        alpha[i, i] = one
    beta = zeros_like_mode((m + 1, m + 1), exact)
    gamma = zeros_like_mode((m + 1, m), exact)
    cc = scalar_abs2(c)
    if exact:
        cc = GaussRational(cc)
    if m == 1:
        beta[0, 1] = a
        gamma[1, 0] = GaussRational(scalar_abs2(a)) if exact else scalar_abs2(a)
    elif m >= 2:
        for i in range(m):
            beta[i, i + 1] = c
        beta[m, m - 2] = c.conjugate() - a.conjugate()
        if m == 2:
            band = cc - (GaussRational(scalar_abs2(a - c)) if exact else scalar_abs2(a - c))
        else:
            band = cc
            gamma[0, 2] = c * (c - a)
        for i in range(1, m + 1):
            gamma[i, i - 1] = band
    return ThreeTermCoeffs(m, alpha, beta, gamma)


@dataclass(frozen=True)
class PolyFamily:
    """Triangular table of polynomials together with its recurrence data."""

    kind: str
    table: list
    a: object = None
    c: object = None
    coeffs: list = field(default_factory=list)

    @property
    def m_max(self) -> int:
        return len(self.table) - 1

    @property
    def exact(self) -> bool:
        return self.table[0][0].exact

    def __getitem__(self, mk):
        m, k = mk
        return self.get(m, k)

    def get(self, m: int, k: int) -> BivarPoly:
        """``table[m][k]``, with zero outside ``0 <= k <= m``."""
        if m < 0 or k < 0 or k > m:
            return BivarPoly.zero(self.exact)
        return self.table[m][k]


def _apply_rows(M: np.ndarray, polys: list, exact: bool) -> list:
    out = []
    for i in range(M.shape[0]):
        acc = BivarPoly.zero(exact)
        for j in range(M.shape[1]):
            if M[i, j] != 0:
                acc = acc + polys[j].scale(M[i, j])
        out.append(acc)
    return out


def gen_Q(m_max: int, a, c) -> tuple[PolyFamily, list[ThreeTermCoeffs]]:
    """Generate ``Q_k^m`` for ``0 <= k <= m <= m_max`` by recurrence."""
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    a, c, exact = _params(a, c)
    z = BivarPoly.z(exact)
    table = [[BivarPoly.const(1 if exact else 1.0, exact)]]
    coeffs = []
    prev: list = []
    for m in range(m_max + 1):
        tc = qac_coeffs(m, a, c)
        coeffs.append(tc)
        if m == m_max:
            break
        cur = table[m]
        bq = _apply_rows(tc.beta, cur, exact)
        gq = _apply_rows(tc.gamma, prev, exact) if m else [BivarPoly.zero(exact)] * (m + 1)
        nxt = [z * cur[k] - bq[k] - gq[k] for k in range(m + 1)]
        nxt.append(conj_reflect(nxt[0]))
        table.append(nxt)
        prev = cur
    kind = "P" if a == c else "Q"
    return PolyFamily(kind, table, a, c, coeffs), coeffs


def gen_P(m_max: int, c) -> PolyFamily:
    """The banded Toeplitz family ``P(c)``: ``Q(a, c)`` with ``a == c``."""
    fam, _ = gen_Q(m_max, c, c)
    return fam


def gen_chebyshev_U(n_max: int, exact: bool = True) -> PolyFamily:
    """Chebyshev polynomials of the second kind on the deltoid.

    Starts from ``U_0^0 = 1``, ``U_0^1 = 3 z``, ``U_1^1 = 3 zbar``; each new
    row comes from the recurrence for ``k <= n`` and the last entry from
    ``U_{n+1}^{n+1} = conj_reflect(U_0^{n+1})``.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    one = 1 if exact else 1.0
    three_z = BivarPoly({(1, 0): 3 * one}, exact=exact)
    table = [[BivarPoly.const(one, exact)]]
    if n_max >= 1:
        table.append([three_z, BivarPoly({(0, 1): 3 * one}, exact=exact)])
    fam = PolyFamily("chebyshevU", table)
    for n in range(1, n_max):
        row = [three_z * table[n][k] - fam.get(n, k + 1) - fam.get(n - 1, k - 1)
               for k in range(n + 1)]
        row.append(conj_reflect(row[0]))
        table.append(row)
    return fam


def lemma41_expand(m: int, k: int, a, c, Pfam: PolyFamily) -> BivarPoly:
    """``Q_k^m`` written as a combination of ``P(c)`` polynomials.

    With ``d = a - c``:

    * ``k = 0``:   ``P_0^m - d P_1^{m-1} + c^2 conj(d) P_0^{m-3} - c^2 |d|^2 P_1^{m-4}``
    * ``k = 1``:   ``P_1^m - conj(c) d P_0^{m-2} + c^2 conj(d) P_1^{m-3} - c|c|^2 |d|^2 P_0^{m-5}``
    * interior:    ``P_k^m + conj(c)^2 d P_{k-3}^{m-3} + c^2 conj(d) P_k^{m-3} + |c|^4 |d|^2 P_{k-3}^{m-6}``
    * ``k = m-1`` and ``k = m`` are the reflections of ``k = 1`` and ``k = 0``.

    Out-of-range ``P`` terms are zero. At ``m = 2, 3`` the perturbed first
    and last rows share a minor and the expansions at ``(m, k)`` in
    ``{(2, 1), (3, 0), (3, 3)}`` pick up one extra ``|d|^2`` term.
    """
    if m < 0 or not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got m={m}, k={k}")
    if Pfam.m_max < m:
        raise ValueError(f"P family only reaches degree {Pfam.m_max}")
    a, c, exact = _params(a, c)
    d = a - c
    db = d.conjugate()
    cb = c.conjugate()
    dd = d * db
    cc = c * cb
    P = Pfam.get

    def comb(*terms):
        acc = BivarPoly.zero(exact)
        for coef, poly in terms:
            if coef != 0 and not poly.is_zero():
                acc = acc + poly.scale(coef)
        return acc

    if (m, k) == (2, 1):
        return comb((1, P(2, 1)), (-(cb * d + c * db + dd), P(0, 0)))
    if (m, k) == (3, 0):
        return comb((1, P(3, 0)), (-d, P(2, 1)), (c * c * db + c * dd, P(0, 0)))
    if (m, k) == (3, 3):
        return comb((1, P(3, 3)), (-db, P(2, 1)), (cb * cb * d + cb * dd, P(0, 0)))

    if k == 0:
        return comb((1, P(m, 0)), (-d, P(m - 1, 1)), (c * c * db, P(m - 3, 0)),
                    (-c * c * dd, P(m - 4, 1)))
    if k == m:
        return comb((1, P(m, m)), (-db, P(m - 1, m - 2)), (cb * cb * d, P(m - 3, m - 3)),
                    (-cb * cb * dd, P(m - 4, m - 5)))
    if k == 1:
        return comb((1, P(m, 1)), (-cb * d, P(m - 2, 0)), (c * c * db, P(m - 3, 1)),
                    (-c * cc * dd, P(m - 5, 0)))
    if k == m - 1:
        return comb((1, P(m, m - 1)), (-c * db, P(m - 2, m - 2)),
                    (cb * cb * d, P(m - 3, m - 4)), (-cb * cc * dd, P(m - 5, m - 5)))
    return comb((1, P(m, k)), (cb * cb * d, P(m - 3, k - 3)), (c * c * db, P(m - 3, k)),
                (cc * cc * dd, P(m - 6, k - 3)))


def scale_cor36(Pfam: PolyFamily, a) -> PolyFamily:
    """Rescale ``P(c)`` with ``c = conj(a)**3 / |a|**2`` onto the Chebyshev family.

    ``U_k^m(z, zbar) = conj(a)**(k-m) * a**(-k) * P_k^m(3 conj(a) z, 3 a zbar)``.
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    exact = Pfam.exact
    a = as_exact(a) if exact else complex(a)
    ab = a.conjugate()
    c = Pfam.c
    target = ab * ab * ab / (a * ab)
    if exact:
        if c != target:
            raise ValueError(f"family parameter c={c} differs from conj(a)^3/|a|^2={target}")
    elif abs(complex(c) - complex(target)) > 1e-12 * max(1.0, abs(complex(target))):
        raise ValueError("family parameter c differs from conj(a)^3/|a|^2")
    sz, szb = 3 * ab, 3 * a
    table = []
    for m, row in enumerate(Pfam.table):
        out = []
        for k, p in enumerate(row):
            s = (ab ** (k - m)) * (a ** (-k)) if exact else ab ** (k - m) * a ** (-k)
            coeffs = {(j, l): v * (sz ** j) * (szb ** l) * s for (j, l), v in p.items()}
            out.append(BivarPoly(coeffs, exact=exact))
        table.append(out)
    return PolyFamily("chebyshevU", table)


def real_basis_matrix(n: int) -> np.ndarray:
    """Unitary ``S_n`` mapping a conjugation-symmetric complex basis to a real one.

    Row ``k < n/2`` is ``(e_k + e_{n-k})/sqrt 2``, row ``k > n/2`` is
    ``(e_k - e_{n-k})/(sqrt 2 i)``; the middle row for even ``n`` is ``e_{n/2}``.
    """
    S = np.zeros((n + 1, n + 1), dtype=complex)
    r = 1 / math.sqrt(2)
    for k in range(n + 1):
        if 2 * k < n:
            S[k, k] += r
            S[k, n - k] += r
        elif 2 * k > n:
            S[k, k] += -1j * r
            S[k, n - k] -= -1j * r
        else:
            S[k, k] = 1.0
    return S


def to_real_basis(values, n: int, tol: float = 1e-12) -> np.ndarray:
    """Map values ``v[k]`` with ``v[k] == conj(v[n-k])`` to the real basis."""
    v = np.asarray(values, dtype=complex)
    if v.shape[0] != n + 1:
        raise ValueError(f"expected {n + 1} values, got {v.shape[0]}")
    scale = max(1.0, float(np.abs(v).max(initial=0.0)))
    if np.abs(v - np.conj(v[::-1])).max(initial=0.0) > tol * scale:
        raise ValueError("values violate v[k] == conj(v[n-k])")
    out = real_basis_matrix(n) @ v
    return out.real


def _rank(M: np.ndarray, tol: float = 1e-10) -> int:
    s = np.linalg.svd(np.asarray(M, dtype=complex), compute_uv=False)
    return int((s > tol).sum())


def rank_conditions(alpha: np.ndarray, gamma: np.ndarray, tol: float = 1e-10) -> dict:
    """Ranks used by the Favard-type characterization at one degree.

    ``alpha`` is ``(n+1) x (n+2)`` and ``gamma`` is ``(n+1) x n``.
    """
    from .poly import to_complex

    A, G = to_complex(alpha), to_complex(gamma)
    Av, Gv = vee(A), vee(G)
    return {
        "alpha_plus": _rank(A + Av, tol),
        "alpha_minus": _rank(A - Av, tol),
        "alpha_stack": _rank(np.vstack([A, Av]), tol),
        "gamma_plus": _rank(G + Gv, tol) if G.size else 0,
        "gamma_minus": _rank(G - Gv, tol) if G.size else 0,
        "gamma_stack": _rank(np.vstack([G, Gv]), tol) if G.size else 0,
    }
