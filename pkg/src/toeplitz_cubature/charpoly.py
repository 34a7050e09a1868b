"""Generalized characteristic polynomials of rectangular matrix pencils.

A pencil is ``A + z_0 I_0 + ... + z_n I_n`` where ``A`` is an
``m x (m+n)`` constant matrix and ``I_s`` is the 0/1 matrix with ones where
``column == row + s``. The polynomial ``P_I`` is the determinant of the
``m`` columns listed in ``I``.

Determinants here are the slow, independent route to the polynomial
families; :mod:`toeplitz_cubature.families` computes the same polynomials
by recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .poly import BivarPoly, conj_reflect, is_centrohermitian
from .scalars import GaussRational, as_exact, is_exact

__all__ = [
    "CharPencil",
    "build_pencil_aac",
    "centrohermitian_toeplitz",
    "charpoly_I",
    "check_reflection",
    "det_laplace",
    "eval_charpoly_I",
    "q_via_determinant",
    "reflect_index_set",
    "unit_shift",
]


def unit_shift(s: int, m: int, n: int) -> np.ndarray:
    """The ``m x (m+n)`` matrix with ones at ``j == i + s`` (0 <= s <= n)."""
    if not 0 <= s <= n:
        raise ValueError(f"shift {s} outside 0..{n}")
    out = np.zeros((m, m + n))
    for i in range(m):
        out[i, i + s] = 1.0
    return out


@dataclass(frozen=True)
class CharPencil:
    """``base + sum_s z_s * unit_shift(s)``, with ``base`` of shape ``m x (m+n)``.

    ``base`` is an object array of ``GaussRational`` in exact mode and a
    complex array otherwise.
    """

    base: np.ndarray

    def __post_init__(self):
        m, w = self.base.shape
        if m < 1 or w < m:
            raise ValueError(f"pencil shape {self.base.shape} is not m x (m+n)")

    @property
    def m(self) -> int:
        return self.base.shape[0]

    @property
    def n(self) -> int:
        return self.base.shape[1] - self.base.shape[0]

    @property
    def nvars(self) -> int:
        return self.n + 1

    @property
    def exact(self) -> bool:
        return self.base.dtype == object

    def entry_poly(self, i: int, j: int) -> BivarPoly:
        """Entry ``(i, j)`` (0-based) as a polynomial in (z, zbar); needs ``n == 1``."""
        if self.n != 1:
            raise ValueError("polynomial entries need a two-variable pencil")
        one = 1 if self.exact else 1.0
        c = {(0, 0): self.base[i, j]}
        if j == i:
            c[(1, 0)] = one
        elif j == i + 1:
            c[(0, 1)] = one
        return BivarPoly(c, exact=self.exact)

    def evaluate(self, point: Sequence[complex]) -> np.ndarray:
        """Numeric pencil at ``(z_0, ..., z_n)``."""
        point = list(point)
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        M = np.array([[complex(v) for v in row] for row in self.base], dtype=complex)
        for s, zs in enumerate(point):
            M = M + complex(zs) * unit_shift(s, self.m, self.n)
        return M


def build_pencil_aac(m: int, a, c) -> CharPencil:
    """The ``m x (m+1)`` near-banded Toeplitz pencil with parameters ``a`` and ``c``.

    First row ``(z, zbar, conj a, 0, ...)``, interior rows
    ``(..., c, z, zbar, conj c, ...)`` and last row ``(..., a, z, zbar)``.
    With ``a == c`` it is the banded Toeplitz pencil.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    exact = is_exact(a) and is_exact(c)
    if exact:
        a, c = as_exact(a), as_exact(c)
        base = np.empty((m, m + 1), dtype=object)
        base[...] = GaussRational(0)
    else:
        a, c = complex(a), complex(c)
        base = np.zeros((m, m + 1), dtype=complex)
    for i in range(m):
        if i == 0:
            if m >= 2:
                base[0, 2] = a.conjugate()
        elif i == m - 1:
            base[i, i - 1] = a
        else:
            base[i, i - 1] = c
            base[i, i + 2] = c.conjugate()
    return CharPencil(base)


def centrohermitian_toeplitz(m: int, n: int, diagonals) -> np.ndarray:
    """Toeplitz ``m x (m+n)`` matrix ``(t[j - i])`` forced to be centrohermitian.

    ``diagonals`` maps offsets ``d`` in ``-(m-1) .. m+n-1`` to values; the
    constraint ``t[d] == conj(t[n - d])`` is imposed by overwriting the
    offsets with ``2 d > n`` and taking the real part at ``2 d == n``.
    """
    t = {d: complex(diagonals.get(d, 0)) for d in range(-(m - 1), m + n)}
    for d in list(t):
        if 2 * d > n:
            t[d] = np.conj(t[n - d])
        elif 2 * d == n:
            t[d] = complex(t[d].real)
    A = np.zeros((m, m + n), dtype=complex)
    for i in range(m):
        for j in range(m + n):
            A[i, j] = t[j - i]
    return A


def _validate_index_set(I: Sequence[int], m: int, width: int) -> tuple[int, ...]:
    I = tuple(int(i) for i in I)
    if len(I) != m:
        raise ValueError(f"index set needs {m} columns, got {len(I)}")
    if any(b <= a for a, b in zip(I, I[1:])):
        raise ValueError("index set must be strictly increasing")
    if I[0] < 1 or I[-1] > width:
        raise ValueError(f"column indices must lie in 1..{width}")
    return I


def reflect_index_set(I: Sequence[int], m: int, n: int) -> tuple[int, ...]:
    """``m + n + 1 - I``, sorted increasingly (1-based columns)."""
    return tuple(sorted(m + n + 1 - i for i in I))


def det_laplace(M: Sequence[Sequence], zero):
    """Determinant by row-wise Laplace expansion with memoized minors.

    Works over any commutative ring whose elements support ``+``, ``-`` and
    ``*`` and compare equal to ``zero``; costs ``O(2**k * k)`` ring
    products for a ``k x k`` matrix, so it stays exact without division.
    """
    k = len(M)
    if k == 0:
        return None
    if any(len(r) != k for r in M):
        raise ValueError("determinant of a non-square matrix")

    @lru_cache(maxsize=None)
    def minor(cols: tuple[int, ...]):
        r = k - len(cols)
        if len(cols) == 1:
            return M[r][cols[0]]
        acc = None
        for pos, j in enumerate(cols):
            e = M[r][j]
            if e == zero:
                continue
            sub = minor(cols[:pos] + cols[pos + 1:])
            term = e * sub
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        return zero if acc is None else acc

    return minor(tuple(range(k)))


def charpoly_I(P: CharPencil, I: Sequence[int]) -> BivarPoly:
    """``det`` of the columns ``I`` (1-based) of a two-variable pencil, as a polynomial."""
    I = _validate_index_set(I, P.m, P.m + P.n)
    if P.n != 1:
        raise NotImplementedError(
            "closed-form expansion is only available for two-variable pencils; "
            "use eval_charpoly_I")
    rows = [[P.entry_poly(i, j - 1) for j in I] for i in range(P.m)]
    return det_laplace(rows, BivarPoly.zero(P.exact))


def eval_charpoly_I(P: CharPencil, I: Sequence[int], point: Sequence[complex]) -> complex:
    """Numeric ``P_I(z_0, ..., z_n)`` for a pencil in any number of variables."""
    I = _validate_index_set(I, P.m, P.m + P.n)
    M = P.evaluate(point)
    return complex(np.linalg.det(M[:, [i - 1 for i in I]]))


def q_via_determinant(m: int, k: int, a, c) -> BivarPoly:
    """``Q_k^m``: the pencil determinant with 0-based column ``m - k`` removed.

    ``m == 0`` gives the constant 1. The result is monic with leading
    monomial ``z**(m-k) * zbar**k``.
    """
    if m < 0 or not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got m={m}, k={k}")
    exact = is_exact(a) and is_exact(c)
    if m == 0:
        return BivarPoly.const(1 if exact else 1.0, exact=exact)
    P = build_pencil_aac(m, a, c)
    drop = m - k
    I = [j + 1 for j in range(m + 1) if j != drop]
    return charpoly_I(P, I)


def check_reflection(P: CharPencil, I: Sequence[int], samples, strict: bool = True,
                     tol: float = 1e-12) -> float:
    """Largest ``|P_Ibar(z) - conj(P_I(conj z reversed))|`` over the sample points.

    With ``strict`` a non-centrohermitian base raises ``ValueError``; pass
    ``strict=False`` to measure the residual anyway.
    """
    if strict and not is_centrohermitian(P.base, 0.0 if P.exact else tol):
        raise ValueError("base matrix is not centrohermitian")
    I = _validate_index_set(I, P.m, P.m + P.n)
    Ibar = reflect_index_set(I, P.m, P.n)
    worst = 0.0
    for pt in samples:
        pt = [complex(v) for v in pt]
        rev = [np.conj(v) for v in reversed(pt)]
        lhs = eval_charpoly_I(P, Ibar, pt)
        rhs = np.conj(eval_charpoly_I(P, I, rev))
        worst = max(worst, abs(lhs - rhs))
    return worst


def check_reflection_poly(P: CharPencil, I: Sequence[int]) -> bool:
    """Exact polynomial form of the reflection identity for two-variable pencils."""
    Ibar = reflect_index_set(I, P.m, P.n)
    return charpoly_I(P, Ibar) == conj_reflect(charpoly_I(P, I))
