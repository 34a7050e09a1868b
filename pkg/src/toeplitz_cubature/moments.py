"""Moment functional, Gram matrices and parameter regimes.

The functional ``L`` is pinned down by the recurrence and ``L(1) = 1``:
``L(Q_k^n) = 0`` for ``n >= 1``. Moments ``L(z^j zbar^k)`` are read off by
applying the multiplication operators for ``z`` and ``zbar`` to the
coefficient vector of the constant polynomial. No density is involved.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .families import PolyFamily, ThreeTermCoeffs, qac_coeffs
from .poly import (BivarPoly, conj_reflect, exchange, mat_conj, to_complex, vee,
                   zeros_like_mode)
from .scalars import GaussRational, as_exact, is_exact, scalar_abs2

__all__ = [
    "GramSequence",
    "MomentTable",
    "ParamRegime",
    "gamma_consistency",
    "gram_closed",
    "gram_from_moments",
    "gram_recursion_residuals",
    "gram_recursive",
    "moment_table",
    "monomial_moment",
    "param_classify",
    "posdef_probe",
]


def _params(a, c):
    if is_exact(a) and is_exact(c):
        return as_exact(a), as_exact(c), True
    return complex(a), complex(c), False


class ParamRegime(str, enum.Enum):
    GAUSSIAN_VALID = "gaussian-valid"
    QUASI_DEFINITE_ONLY = "quasi-definite-only"
    DEGENERATE = "degenerate"


def param_classify(a, c, tol: float = 1e-10) -> ParamRegime:
    """Classify ``(a, c)``.

    Gaussian-valid needs ``a, c != 0``, ``c (c - a)`` real and
    ``|c| >= 2 |c - a|``. Exact parameters are tested exactly; float
    parameters use ``tol`` relative to ``|c (c - a)|`` for the reality test.
    """
    a, c, exact = _params(a, c)
    if a == 0 or c == 0:
        return ParamRegime.DEGENERATE
    beta = c * (c - a)
    if exact:
        real = beta.im == 0
        dominant = scalar_abs2(c) >= 4 * scalar_abs2(c - a)
    else:
        real = abs(beta.imag) <= tol * abs(beta)
        dominant = abs(c) >= 2 * abs(c - a) * (1 - tol)
    if real and dominant:
        return ParamRegime.GAUSSIAN_VALID
    return ParamRegime.QUASI_DEFINITE_ONLY


# --------------------------------------------------------------------------
# multiplication operators on Q-coefficient vectors


def _sparse_rows(M: np.ndarray) -> list[list[tuple[int, object]]]:
    return [[(j, M[i, j]) for j in range(M.shape[1]) if M[i, j] != 0]
            for i in range(M.shape[0])]


class _Operators:
    """Sparse z- and zbar-multiplication on ``{(degree, index): coeff}`` vectors."""

    def __init__(self, coeffs: list[ThreeTermCoeffs]):
        self.depth = len(coeffs) - 1
        self.z = [(_sparse_rows(t.alpha), _sparse_rows(t.beta), _sparse_rows(t.gamma))
                  for t in coeffs]
        self.zb = [(_sparse_rows(t.alpha_vee), _sparse_rows(t.beta_vee),
                    _sparse_rows(t.gamma_vee)) for t in coeffs]

    def apply(self, vec: dict, conj: bool) -> dict:
        ops = self.zb if conj else self.z
        out: dict = {}
        for (n, k), v in vec.items():
            if n > self.depth:
                raise ValueError(f"recurrence coefficients only reach degree {self.depth}")
            al, be, ga = ops[n]
            for shift, rows in ((1, al), (0, be), (-1, ga)):
                for j, m in rows[k]:
                    key = (n + shift, j)
                    t = v * m
                    out[key] = out[key] + t if key in out else t
        return {key: v for key, v in out.items() if v != 0}


@dataclass(frozen=True)
class MomentTable:
    """``mu[j][k] = L(z^j zbar^k)`` for ``j + k <= degree``."""

    mu: list
    degree: int

    def __getitem__(self, jk):
        j, k = jk
        if j + k > self.degree:
            raise ValueError(f"moment ({j}, {k}) beyond degree {self.degree}")
        return self.mu[j][k]

    def apply(self, p: BivarPoly):
        """``L(p)`` for a polynomial of degree at most ``degree``."""
        acc = GaussRational(0) if p.exact else 0j
        for (j, k), v in p.items():
            acc = acc + v * self[j, k]
        return acc


def moment_table(degree: int, coeffs: list[ThreeTermCoeffs]) -> MomentTable:
    """All moments up to total ``degree``; needs coefficients to that degree."""
    if len(coeffs) <= degree:
        raise ValueError(f"need recurrence coefficients through degree {degree}")
    exact = coeffs[0].alpha.dtype == object
    ops = _Operators(coeffs[: degree + 1])
    one = GaussRational(1) if exact else 1 + 0j
    zero = GaussRational(0) if exact else 0j
    mu = [[zero] * (degree + 1 - j) for j in range(degree + 1)]
    v = {(0, 0): one}
    for j in range(degree + 1):
        w = v
        for k in range(degree + 1 - j):
            mu[j][k] = w.get((0, 0), zero)
            if k < degree - j:
                w = ops.apply(w, conj=True)
        if j < degree:
            v = ops.apply(v, conj=False)
    return MomentTable(mu, degree)


def monomial_moment(j: int, k: int, coeffs: list[ThreeTermCoeffs]):
    """``L(z^j zbar^k)``."""
    if len(coeffs) <= j + k:
        raise ValueError(f"need recurrence coefficients through degree {j + k}")
    exact = coeffs[0].alpha.dtype == object
    ops = _Operators(coeffs[: j + k + 1])
    v = {(0, 0): GaussRational(1) if exact else 1 + 0j}
    for _ in range(j):
        v = ops.apply(v, conj=False)
    for _ in range(k):
        v = ops.apply(v, conj=True)
    return v.get((0, 0), GaussRational(0) if exact else 0j)


# --------------------------------------------------------------------------
# Gram matrices


def gram_from_moments(n: int, Qfam: PolyFamily, moments: MomentTable) -> np.ndarray:
    """``H_n[j, k] = L(Q_j^n * conj_reflect(Q_k^n))`` by monomial expansion."""
    if moments.degree < 2 * n:
        raise ValueError(f"moments reach degree {moments.degree}, need {2 * n}")
    exact = Qfam.exact
    H = zeros_like_mode((n + 1, n + 1), exact)
    row = Qfam.table[n]
    refl = [conj_reflect(q) for q in row]
    for j in range(n + 1):
        for k in range(n + 1):
            H[j, k] = moments.apply(row[j] * refl[k])
    return H


def gram_closed(n: int, a, c) -> np.ndarray:
    """Closed-form ``H_n`` with ``alpha = |c|^2 - |a - c|^2``, ``beta = c (c - a)``.

    ``H_0 = 1``, ``H_1 = |a|^2 I`` and ``H_2 = |a|^2 alpha I``. For ``n >= 3``
    ``H_n = alpha |a|^2 |c|^(2(n-3)) T_n`` where ``T_n`` is Hermitian with

        T_n[i, i + 3t] = |c|^2 (beta / |c|^2)^t,   t = 0, 1, 2, ...

    so every third diagonal is populated, not only the +-3 ones. In
    particular ``det H_3 = (alpha |a|^2)^4 |c|^6 alpha``.
    """
    a, c, exact = _params(a, c)
    aa, cc = scalar_abs2(a), scalar_abs2(c)
    alpha = cc - scalar_abs2(a - c)
    beta = c * (c - a)
    if exact:
        aa, cc, alpha = GaussRational(aa), GaussRational(cc), GaussRational(alpha)
    H = zeros_like_mode((n + 1, n + 1), exact)
    if n == 0:
        H[0, 0] = GaussRational(1) if exact else 1.0
        return H
    if n <= 2:
        pref = aa if n == 1 else aa * alpha
        for i in range(n + 1):
            H[i, i] = pref
        return H
    pref = alpha * aa * cc ** (n - 3)
    ratio = beta / cc
    for i in range(n + 1):
        band = pref * cc
        for t in range((n - i) // 3 + 1):
            H[i, i + 3 * t] = band
            if t:
                H[i + 3 * t, i] = band.conjugate()
            band = band * ratio
    return H


def _transpose(M: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(M.T)


def gram_recursive(n_max: int, coeffs: list[ThreeTermCoeffs]) -> tuple[list, int | None]:
    """Build ``H_0 .. H_{n_max}`` from ``H_0 = 1`` with the row-block recursion.

    ``[I 0] H_n = J H_{n-1}^t gamma^t J`` gives the first ``n`` rows and
    ``[0 I] H_n = J H_{n-1}^t (gamma^vee)^t J`` the last ``n``. The two
    overlap in ``n - 1`` rows; when they disagree the functional cannot be
    Hermitian and the degree is returned as the second item.
    """
    exact = coeffs[0].alpha.dtype == object
    H = [zeros_like_mode((1, 1), exact)]
    H[0][0, 0] = GaussRational(1) if exact else 1.0
    for n in range(1, n_max + 1):
        g = coeffs[n].gamma
        J1, Jn = exchange(n + 1, exact), exchange(n, exact)
        top = Jn @ _transpose(H[n - 1]) @ _transpose(g) @ J1
        bottom = Jn @ _transpose(H[n - 1]) @ _transpose(vee(g)) @ J1
        Hn = zeros_like_mode((n + 1, n + 1), exact)
        Hn[:n] = top
        Hn[n] = bottom[n - 1]
        overlap = top[1:] - bottom[:-1]
        if exact:
            ok = all(v == 0 for v in overlap.flat)
        else:
            scale = max(1.0, float(np.abs(to_complex(Hn)).max()))
            ok = overlap.size == 0 or np.abs(to_complex(overlap)).max() <= 1e-10 * scale
        H.append(Hn)
        if not ok:
            return H, n
    return H, None


@dataclass(frozen=True)
class GramSequence:
    """``H_n`` for ``n = 0 .. n_max`` plus the scalars they are built from."""

    H: list
    a: object
    c: object

    @property
    def alpha_param(self):
        return scalar_abs2(self.c) - scalar_abs2(self.a - self.c)

    @property
    def beta_param(self):
        return self.c * (self.c - self.a)

    @classmethod
    def closed(cls, n_max: int, a, c) -> "GramSequence":
        return cls([gram_closed(n, a, c) for n in range(n_max + 1)], a, c)


def _maxabs(M: np.ndarray):
    if M.size == 0:
        return 0
    if M.dtype == object:
        return max(abs(v) for v in M.flat)
    return float(np.abs(M).max())


def gamma_consistency(n: int, coeffs: list[ThreeTermCoeffs], grams: list) -> float:
    """``max |gamma_{n-1} H_{n-1} - J (alpha_{n-1} H_n)^t J|``.

    ``gamma_{n-1}`` is the ``gamma`` stored with degree ``n``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    exact = coeffs[0].alpha.dtype == object
    g, al = coeffs[n].gamma, coeffs[n - 1].alpha
    lhs = g @ grams[n - 1]
    rhs = exchange(n + 1, exact) @ _transpose(al @ grams[n]) @ exchange(n, exact)
    return _maxabs(lhs - rhs)


def gram_recursion_residuals(n: int, coeffs: list[ThreeTermCoeffs], grams: list) -> tuple:
    """Residuals of both row-block identities linking ``H_n`` and ``H_{n-1}``."""
    exact = coeffs[0].alpha.dtype == object
    g = coeffs[n].gamma
    J1, Jn = exchange(n + 1, exact), exchange(n, exact)
    Hn, Hp = grams[n], grams[n - 1]
    r1 = Hn[:n] - Jn @ _transpose(Hp) @ _transpose(g) @ J1
    r2 = Hn[1:] - Jn @ _transpose(Hp) @ _transpose(vee(g)) @ J1
    return _maxabs(r1), _maxabs(r2)


def _is_hermitian(H: np.ndarray, tol: float) -> bool:
    Hs = _transpose(mat_conj(H))
    if H.dtype == object:
        return all(x == y for x, y in zip(H.flat, Hs.flat))
    return _maxabs(H - Hs) <= tol * max(1.0, _maxabs(H))


def _ldl_pivots(H: np.ndarray) -> list:
    """Pivots of an unpivoted Hermitian LDL* factorization (exact or float)."""
    A = H.copy()
    n = A.shape[0]
    piv = []
    for k in range(n):
        p = A[k, k]
        piv.append(p)
        if p == 0:
            break
        for i in range(k + 1, n):
            f = A[i, k] / p
            if f != 0:
                A[i, k:] = A[i, k:] - f * A[k, k:]
    return piv


def is_positive_definite(H: np.ndarray, rel: float = 1e-12) -> bool:
    """Hermitian and every LDL* pivot positive.

    Exact matrices are tested exactly; float pivots must exceed
    ``rel * max(diag)``.
    """
    exact = H.dtype == object
    if not _is_hermitian(H, 0.0 if exact else 1e-12):
        return False
    piv = _ldl_pivots(H)
    if len(piv) < H.shape[0]:
        return False
    if exact:
        return all(p.im == 0 and p.re > 0 for p in piv)
    dmax = max(abs(complex(H[i, i])) for i in range(H.shape[0]))
    return all(complex(p).real > rel * dmax for p in piv)


def posdef_probe(n_max: int, a, c) -> int | None:
    """First ``n <= n_max`` at which ``H_n`` is not Hermitian positive definite.

    Grams come from :func:`gram_recursive`; a conflict between its two
    row-block identities (possible only when ``c (c - a)`` is not real)
    counts as a failure at that degree. Returns ``None`` when all pass.
    """
    a, c, _ = _params(a, c)
    coeffs = [qac_coeffs(n, a, c) for n in range(n_max + 1)]
    H, bad = gram_recursive(n_max, coeffs)
    for n, Hn in enumerate(H):
        if bad is not None and n == bad:
            return n
        if not is_positive_definite(Hn):
            return n
    return None
