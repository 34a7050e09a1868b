"""Polynomials in the conjugate pair (z, zbar) and exchange-matrix algebra.

``z`` and ``zbar`` are independent indeterminates; they are tied together
only when a polynomial is evaluated, by substituting ``zbar = conj(z)``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .scalars import GaussRational, ModeError, as_exact, is_exact

__all__ = [
    "BivarPoly",
    "conj_reflect",
    "exchange",
    "is_centrohermitian",
    "mat_conj",
    "poly_eval",
    "vee",
]

# relative pruning threshold for float coefficients
FLOAT_PRUNE = 1e-14


def _normalize_coeff(v, exact: bool):
    if exact:
        if not is_exact(v):
            raise ModeError(f"float coefficient {v!r} in an exact polynomial")
        return as_exact(v)
    if isinstance(v, GaussRational):
        raise ModeError("exact coefficient in a float polynomial")
    return complex(v)


class BivarPoly:
    """Polynomial ``sum c[j, k] z**j zbar**k`` with exact or complex coefficients.

    Parameters
    ----------
    coeffs : mapping
        ``{(j, k): coefficient}``. Zero coefficients are dropped.
    exact : bool, optional
        Coefficient mode. Inferred from the coefficients when omitted
        (an empty mapping defaults to exact).
    """

    __slots__ = ("_c", "exact")

    def __init__(self, coeffs: Mapping[tuple[int, int], object] | None = None,
                 exact: bool | None = None):
        coeffs = dict(coeffs or {})
        if exact is None:
            exact = all(is_exact(v) for v in coeffs.values())
        c = {}
        for (j, k), v in coeffs.items():
            if j < 0 or k < 0:
                raise ValueError("negative exponent")
            c[(int(j), int(k))] = _normalize_coeff(v, exact)
        object.__setattr__(self, "exact", bool(exact))
        object.__setattr__(self, "_c", self._prune(c, exact))

    def __setattr__(self, name, value):
        raise AttributeError("BivarPoly is immutable")

    @staticmethod
    def _prune(c: dict, exact: bool) -> dict:
        if exact:
            return {e: v for e, v in c.items() if v != 0}
        if not c:
            return c
        scale = max(abs(v) for v in c.values())
        return {e: v for e, v in c.items() if abs(v) > FLOAT_PRUNE * scale}

    @classmethod
    def _raw(cls, c: dict, exact: bool) -> "BivarPoly":
        p = object.__new__(cls)
        object.__setattr__(p, "exact", exact)
        object.__setattr__(p, "_c", cls._prune(c, exact))
        return p

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, v, exact: bool = True) -> "BivarPoly":
        return cls({(0, 0): v}, exact=exact)

    @classmethod
    def z(cls, exact: bool = True) -> "BivarPoly":
        return cls({(1, 0): 1 if exact else 1.0}, exact=exact)

    @classmethod
    def zbar(cls, exact: bool = True) -> "BivarPoly":
        return cls({(0, 1): 1 if exact else 1.0}, exact=exact)

    @classmethod
    def zero(cls, exact: bool = True) -> "BivarPoly":
        return cls({}, exact=exact)

    # views ----------------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def coeff(self, j: int, k: int):
        return self._c.get((j, k), GaussRational(0) if self.exact else 0j)

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((j + k for j, k in self._c), default=-1)

    def is_zero(self) -> bool:
        return not self._c

    def max_abs_coeff(self) -> float:
        return max((abs(v) for v in self._c.values()), default=0.0)

    def to_float(self) -> "BivarPoly":
        if not self.exact:
            return self
        return BivarPoly._raw({e: complex(v) for e, v in self._c.items()}, False)

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "BivarPoly"):
        if self.exact != other.exact:
            raise ModeError("cannot combine exact and float polynomials")

    def _lift(self, other):
        if isinstance(other, BivarPoly):
            self._check(other)
            return other
        if isinstance(other, GaussRational) or is_exact(other):
            if not self.exact:
                raise ModeError("exact scalar with float polynomial")
            return BivarPoly.const(other, exact=True)
        if isinstance(other, (float, complex)):
            if self.exact:
                raise ModeError("float scalar with exact polynomial")
            return BivarPoly.const(other, exact=False)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for e, v in o._c.items():
            c[e] = c[e] + v if e in c else v
        return BivarPoly._raw(c, self.exact)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly._raw({e: -v for e, v in self._c.items()}, self.exact)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, s) -> "BivarPoly":
        if self.exact:
            if not is_exact(s):
                raise ModeError("float scalar with exact polynomial")
            s = as_exact(s)
        else:
            if isinstance(s, GaussRational):
                raise ModeError("exact scalar with float polynomial")
            s = complex(s)
        if s == 0:
            return BivarPoly.zero(self.exact)
        return BivarPoly._raw({e: v * s for e, v in self._c.items()}, self.exact)

    def __mul__(self, other):
        if not isinstance(other, BivarPoly):
            if self._lift(other) is None:
                return NotImplemented
            return self.scale(other)
        self._check(other)
        c: dict = {}
        for (j1, k1), v1 in self._c.items():
            for (j2, k2), v2 in other._c.items():
                e = (j1 + j2, k1 + k2)
                prod = v1 * v2
                c[e] = c[e] + prod if e in c else prod
        return BivarPoly._raw(c, self.exact)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        out = BivarPoly.const(1 if self.exact else 1.0, exact=self.exact)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.exact == other.exact and self._c == other._c

    def __hash__(self):
        return hash((self.exact, frozenset(self._c.items())))

    def allclose(self, other: "BivarPoly", tol: float = 1e-12) -> bool:
        """Coefficientwise comparison, relative to the larger coefficient scale."""
        keys = set(self._c) | set(other._c)
        scale = max(self.max_abs_coeff(), other.max_abs_coeff(), 1.0)
        return all(abs(complex(self.coeff(*e)) - complex(other.coeff(*e))) <= tol * scale
                   for e in keys)

    def __call__(self, z):
        return poly_eval(self, z)

    def __repr__(self):
        if not self._c:
            return "BivarPoly(0)"
        terms = []
        for (j, k), v in sorted(self._c.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
            mono = "*".join(filter(None, [
                "" if j == 0 else ("z" if j == 1 else f"z^{j}"),
                "" if k == 0 else ("zb" if k == 1 else f"zb^{k}"),
            ]))
            terms.append(f"({v})" + (f"*{mono}" if mono else ""))
        return "BivarPoly(" + " + ".join(terms) + ")"


def poly_eval(p: BivarPoly, z):
    """Evaluate ``p(z, conj(z))``.

    Exact ``z`` with an exact polynomial gives an exact result; anything
    else is evaluated in complex floating point. ``z`` may be a numpy array.
    """
    if p.exact and isinstance(z, (GaussRational, int)) and not isinstance(z, bool):
        z = as_exact(z)
        zb = z.conjugate()
        deg = max(p.degree, 0)
        zp = [GaussRational(1)]
        zbp = [GaussRational(1)]
        for _ in range(deg):
            zp.append(zp[-1] * z)
            zbp.append(zbp[-1] * zb)
        acc = GaussRational(0)
        for (j, k), v in p.items():
            acc = acc + v * zp[j] * zbp[k]
        return acc
    z = np.asarray(z, dtype=complex)
    zb = np.conj(z)
    acc = np.zeros_like(z)
    for (j, k), v in p.items():
        acc = acc + complex(v) * z**j * zb**k
    return acc[()] if acc.ndim == 0 else acc


def conj_reflect(p: BivarPoly) -> BivarPoly:
    """Conjugate the coefficients and swap the roles of z and zbar.

    The result ``q`` satisfies ``q(z, conj z) == conj(p(z, conj z))``.
    """
    return BivarPoly._raw({(k, j): v.conjugate() for (j, k), v in p.items()}, p.exact)


# --------------------------------------------------------------------------
# matrices: numpy arrays, dtype=object for exact entries, complex otherwise


def exchange(n: int, exact: bool = False) -> np.ndarray:
    """The n x n anti-diagonal exchange matrix J_n."""
    if exact:
        J = np.empty((n, n), dtype=object)
        J[...] = GaussRational(0)
        for i in range(n):
            J[i, n - 1 - i] = GaussRational(1)
        return J
    return np.eye(n)[::-1].astype(complex)


def mat_conj(M: np.ndarray) -> np.ndarray:
    if M.dtype == object:
        out = np.empty_like(M)
        for idx, v in np.ndenumerate(M):
            out[idx] = v.conjugate()
        return out
    return np.conj(M)


def vee(M: np.ndarray) -> np.ndarray:
    """``J conj(M) J``: rotate by 180 degrees and conjugate."""
    M = np.asarray(M)
    return mat_conj(M)[::-1, ::-1].copy()


def is_centrohermitian(M: np.ndarray, tol: float = 0.0) -> bool:
    """True when ``max |M - J conj(M) J| <= tol``; exact entries are compared exactly."""
    M = np.asarray(M)
    R = vee(M)
    if M.dtype == object and tol == 0:
        return all(a == b for a, b in zip(M.flat, R.flat))
    diff = np.abs(M.astype(complex) - R.astype(complex))
    return bool(diff.size == 0 or diff.max() <= tol)


def as_exact_matrix(rows: Iterable[Iterable]) -> np.ndarray:
    """Build an object array of ``GaussRational`` entries."""
    rows = [[as_exact(v) for v in r] for r in rows]
    M = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            M[i, j] = v
    return M


def zeros_like_mode(shape, exact: bool) -> np.ndarray:
    if exact:
        M = np.empty(shape, dtype=object)
        M[...] = GaussRational(0)
        return M
    return np.zeros(shape, dtype=complex)


def to_complex(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M)
    if M.dtype == object:
        return np.vectorize(complex, otypes=[complex])(M) if M.size else M.astype(complex)
    return M.astype(complex)
