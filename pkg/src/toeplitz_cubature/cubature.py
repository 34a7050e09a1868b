"""Gaussian cubature from the truncated Jacobi operators of the Q(a, c) family.

The recurrence is orthonormalized with Hermitian square roots of the Gram
matrices, turned into multiplication operators for ``x`` and ``y``, rotated
to a real basis and diagonalized jointly. Nodes are the joint eigenvalues,
weights the squared first eigenvector components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .families import PolyFamily, ThreeTermCoeffs, gen_Q, qac_coeffs, real_basis_matrix
from .moments import MomentTable, gram_recursive, moment_table
from .poly import exchange, poly_eval, to_complex
from .scalars import as_exact, is_exact

__all__ = [
    "CubatureError",
    "CubatureRule",
    "JacobiPair",
    "OrthonormalCoeffs",
    "RegimeError",
    "Tolerances",
    "build_jacobi",
    "build_rule",
    "christoffel_weights",
    "common_zeros",
    "deltoid_g",
    "min_separation",
    "orthonormalize",
    "polynomial_vanishing",
    "verify_exactness",
    "weights",
]


class RegimeError(ValueError):
    """The functional is not positive definite up to the requested degree."""

    def __init__(self, degree: int, reason: str):
        super().__init__(f"H_{degree} is not positive definite ({reason})")
        self.degree = degree
        self.reason = reason


class CubatureError(RuntimeError):
    """A numerical certificate of the rule failed."""


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used to certify a rule."""

    orthonormal: float = 1e-11
    symmetry: float = 1e-13
    commutator: float = 1e-10
    joint: float = 1e-9
    christoffel: float = 1e-8
    exactness: float = 1e-8
    posdef: float = 1e-12


def _vee(M: np.ndarray) -> np.ndarray:
    r, c = M.shape
    return exchange(r) @ np.conj(M) @ exchange(c)


def _sqrt_pair(H: np.ndarray, degree: int, rel: float):
    if np.abs(H - H.conj().T).max() > 1e-12 * max(1.0, np.abs(H).max()):
        raise RegimeError(degree, "not Hermitian")
    w, V = np.linalg.eigh(H)
    if w.min() <= rel * w.max():
        raise RegimeError(degree, f"smallest eigenvalue {w.min():.3e}")
    root = (V * np.sqrt(w)) @ V.conj().T
    inv_root = (V / np.sqrt(w)) @ V.conj().T
    return root, inv_root


@dataclass(frozen=True)
class OrthonormalCoeffs:
    """Recurrence of the orthonormal family ``H_n^{-1/2} Q_n``.

    ``gamma[n]`` is the coefficient on degree ``n - 1`` in the expansion
    of ``z Q~_n`` (empty for ``n = 0``).
    """

    alpha: list
    beta: list
    gamma: list
    inv_sqrt_H: list
    residual: float


def orthonormalize(coeffs: list[ThreeTermCoeffs], grams: list,
                   tol: Tolerances = Tolerances()) -> OrthonormalCoeffs:
    """Conjugate the recurrence by Hermitian square roots of the Grams.

    Parameters
    ----------
    coeffs : list of ThreeTermCoeffs
        Degrees ``0 .. m``.
    grams : list of arrays
        ``H_0 .. H_{m+1}`` (exact or float).

    Raises
    ------
    RegimeError
        At the first Gram that is not Hermitian positive definite.
    """
    m = len(coeffs) - 1
    if len(grams) < m + 2:
        raise ValueError(f"need Gram matrices through degree {m + 1}")
    roots, inv_roots = [], []
    for n in range(m + 2):
        r, ir = _sqrt_pair(to_complex(grams[n]), n, tol.posdef)
        roots.append(r)
        inv_roots.append(ir)
    alpha, beta, gamma = [], [], []
    resid = 0.0
    for n in range(m + 1):
        tc = coeffs[n]
        alpha.append(inv_roots[n] @ to_complex(tc.alpha) @ roots[n + 1])
        beta.append(inv_roots[n] @ to_complex(tc.beta) @ roots[n])
        if n == 0:
            gamma.append(np.zeros((1, 0), dtype=complex))
            continue
        g = inv_roots[n] @ to_complex(tc.gamma) @ roots[n - 1]
        gamma.append(g)
        resid = max(resid, float(np.abs(g - _vee(alpha[n - 1].conj().T)).max()))
    if resid > tol.orthonormal:
        raise CubatureError(f"orthonormal relation residual {resid:.3e}")
    return OrthonormalCoeffs(alpha, beta, gamma, inv_roots, resid)


@dataclass(frozen=True)
class JacobiPair:
    """Real symmetric truncations of multiplication by ``x`` and ``y``."""

    T1: np.ndarray
    T2: np.ndarray
    m: int

    @property
    def size(self) -> int:
        return self.T1.shape[0]

    def commutator(self) -> float:
        """``max |T1 T2 - T2 T1|`` over ``||T1|| ||T2||`` (spectral norms)."""
        C = self.T1 @ self.T2 - self.T2 @ self.T1
        scale = np.linalg.norm(self.T1, 2) * np.linalg.norm(self.T2, 2)
        top = float(np.abs(C).max())
        return float(top / scale) if scale > 0 else top

    def asymmetry(self) -> float:
        return float(max(np.abs(self.T1 - self.T1.T).max(), np.abs(self.T2 - self.T2.T).max()))


def build_jacobi(m: int, orth: OrthonormalCoeffs, tol: Tolerances = Tolerances()) -> JacobiPair:
    """Assemble ``T1`` and ``T2`` of size ``m(m+1)/2`` from degrees ``0 .. m-1``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    N = m * (m + 1) // 2
    off = [n * (n + 1) // 2 for n in range(m + 1)]
    S = [real_basis_matrix(n) for n in range(m + 1)]
    X = np.zeros((N, N), dtype=complex)
    Y = np.zeros((N, N), dtype=complex)

    def put(row, col, zb):
        sl = np.s_[off[row]:off[row + 1], off[col]:off[col + 1]]
        v = _vee(zb)
        rot = lambda B: S[row] @ B @ S[col].conj().T
        X[sl] = rot((zb + v) / 2)
        Y[sl] = rot((zb - v) / 2j)

    for n in range(m):
        put(n, n, orth.beta[n])
        if n + 1 < m:
            put(n, n + 1, orth.alpha[n])
        if n >= 1:
            put(n, n - 1, orth.gamma[n])
    scale = max(1.0, float(np.abs(X).max()), float(np.abs(Y).max()))
    imag = max(float(np.abs(X.imag).max()), float(np.abs(Y.imag).max()))
    if imag > 1e-10 * scale:
        raise CubatureError(f"real-basis operators have imaginary part {imag:.3e}")
    T1, T2 = X.real, Y.real
    J = JacobiPair(T1, T2, m)
    if J.asymmetry() > tol.symmetry * scale:
        raise CubatureError(f"Jacobi asymmetry {J.asymmetry():.3e}")
    return JacobiPair((T1 + T1.T) / 2, (T2 + T2.T) / 2, m)


def _clusters(vals: np.ndarray, gap: float) -> list:
    """Index groups of sorted ``vals`` whose consecutive gaps are ``<= gap``."""
    groups, start = [], 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > gap:
            groups.append(np.arange(start, i))
            start = i
    return groups


def _split_clusters(lam: np.ndarray, V: np.ndarray, J: JacobiPair, gap: float) -> np.ndarray:
    # Nodes with equal x + sqrt(2) y share an eigenspace of the mixed matrix.
    # Inside such a space diagonalize T1, then T2 within equal-x groups;
    # distinct nodes cannot agree in both coordinates.
    V = V.copy()
    for g in _clusters(lam, gap):
        if len(g) < 2:
            continue
        B = V[:, g]
        mu, W = np.linalg.eigh(B.T @ J.T1 @ B)
        B = B @ W
        for h in _clusters(mu, gap):
            if len(h) > 1:
                _, W2 = np.linalg.eigh(B[:, h].T @ J.T2 @ B[:, h])
                B[:, h] = B[:, h] @ W2
        V[:, g] = B
    return V


def common_zeros(J: JacobiPair, tol: Tolerances = Tolerances()):
    """Joint eigenpairs of ``T1`` and ``T2``.

    Eigenvectors come from ``T1 + sqrt(2) T2``. Clusters of (near) equal
    eigenvalues are split by re-diagonalizing ``T1`` and then ``T2`` on
    the cluster subspace, and every pair is certified by its residual.

    Returns
    -------
    nodes : ndarray, shape (N, 2)
    vecs : ndarray, shape (N, N)
        Unit eigenvectors as columns.
    residual : float
        ``max_k max(||T1 v - x v||, ||T2 v - y v||) / ||T||``.
    """
    T = J.T1 + math.sqrt(2) * J.T2
    lam, V = np.linalg.eigh(T)
    tnorm = max(np.linalg.norm(T, 2), 1.0)
    V = _split_clusters(lam, V, J, 1e-8 * tnorm)
    x = np.einsum("ik,ij,jk->k", V, J.T1, V)
    y = np.einsum("ik,ij,jk->k", V, J.T2, V)
    r1 = np.linalg.norm(J.T1 @ V - V * x, axis=0)
    r2 = np.linalg.norm(J.T2 @ V - V * y, axis=0)
    residual = float(max(r1.max(), r2.max()) / tnorm)
    if residual > tol.joint:
        raise CubatureError(f"joint eigen residual {residual:.3e}; operators do not commute")
    return np.column_stack([x, y]), V, residual


def weights(J: JacobiPair, eigvecs: np.ndarray, mass: float = 1.0) -> np.ndarray:
    """``lambda_k = v_k[0]**2 * L(1)``."""
    w = eigvecs[0, :] ** 2 * mass
    if np.any(w <= 0):
        raise CubatureError("eigenvector with vanishing first component")
    return w


def christoffel_weights(nodes: np.ndarray, family: PolyFamily, orth: OrthonormalCoeffs,
                        m: int) -> np.ndarray:
    """``1 / sum_{n<m} ||H_n^{-1/2} Q_n(node)||^2``."""
    z = nodes[:, 0] + 1j * nodes[:, 1]
    total = np.zeros(len(z))
    for n in range(m):
        vals = np.array([poly_eval(family.get(n, k).to_float(), z) for k in range(n + 1)])
        vals = orth.inv_sqrt_H[n] @ vals.reshape(n + 1, -1)
        total += np.sum(np.abs(vals) ** 2, axis=0)
    return 1.0 / total


def _monomial_matrix(nodes: np.ndarray, degree: int):
    z = nodes[:, 0] + 1j * nodes[:, 1]
    pz = np.vander(z, degree + 1, increasing=True)
    return pz, np.conj(pz)


def verify_exactness(nodes: np.ndarray, wts: np.ndarray, moments: MomentTable, degree: int,
                     scaled: bool = False) -> float:
    """Max error of the rule over ``z^j zbar^k``, ``j + k <= degree``.

    By default errors are relative to ``|mu|``, or absolute where
    ``|mu| < 1e-12``. With ``scaled=True`` each error is divided by
    ``sum_k lambda_k |z_k^j zbar_k^k|`` instead, which stays meaningful for
    moments that vanish while the individual terms are large.
    """
    if moments.degree < degree:
        raise ValueError(f"moments reach degree {moments.degree}, need {degree}")
    pz, pzb = _monomial_matrix(np.asarray(nodes, dtype=float), degree)
    wts = np.asarray(wts, dtype=float)
    worst = 0.0
    for j in range(degree + 1):
        for k in range(degree + 1 - j):
            approx = np.sum(wts * pz[:, j] * pzb[:, k])
            mu = complex(moments[j, k])
            err = abs(approx - mu)
            if scaled:
                err /= max(float(np.sum(wts * np.abs(pz[:, j] * pzb[:, k]))), 1e-300)
            elif abs(mu) >= 1e-12:
                err /= abs(mu)
            worst = max(worst, float(err))
    return worst


def polynomial_vanishing(nodes: np.ndarray, family: PolyFamily, m: int) -> float:
    """``max_{k, node} |Q_k^m(node)| / max|coeff(Q_k^m)|``."""
    z = np.asarray(nodes)[:, 0] + 1j * np.asarray(nodes)[:, 1]
    worst = 0.0
    for k in range(m + 1):
        q = family.get(m, k).to_float()
        worst = max(worst, float(np.abs(poly_eval(q, z)).max() / q.max_abs_coeff()))
    return worst


def min_separation(nodes: np.ndarray) -> float:
    """Smallest pairwise node distance over the node-set diameter (1.0 for one node)."""
    pts = np.asarray(nodes, dtype=float)
    if len(pts) < 2:
        return 1.0
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    diam = d.max()
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min() / diam)


def deltoid_g(x, y):
    """``-3(x^2+y^2+1)^2 + 8(x^3 - 3xy^2) + 4``; nonnegative on the closed deltoid."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = x * x + y * y
    return -3 * (r + 1) ** 2 + 8 * (x ** 3 - 3 * x * y * y) + 4


@dataclass(frozen=True)
class CubatureRule:
    """Nodes and positive weights exact for degree ``2m - 1``."""

    m: int
    a: object
    c: object
    nodes: np.ndarray
    weights: np.ndarray
    residual: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return 2 * self.m - 1

    def integrate(self, f) -> complex:
        """``sum_k lambda_k f(x_k, y_k)`` for a vectorized ``f(x, y)``."""
        vals = np.asarray(f(self.nodes[:, 0], self.nodes[:, 1]))
        return np.sum(self.weights * vals)

    def sorted(self) -> "CubatureRule":
        """Copy with nodes in lexicographic ``(x, y)`` order.

        Coordinates are compared after rounding to ``1e-9`` of the node
        extent so that rounding noise cannot split symmetric ties.
        """
        scale = max(float(np.abs(self.nodes).max()), 1e-300)
        key = np.round(self.nodes / scale, 9)
        order = np.lexsort((key[:, 1], key[:, 0]))
        return CubatureRule(self.m, self.a, self.c, self.nodes[order], self.weights[order],
                            self.residual, dict(self.diagnostics))


def _coeff_list(degree: int, a, c) -> list:
    return [qac_coeffs(n, a, c) for n in range(degree + 1)]


def build_rule(m: int, a, c, tol: Tolerances = Tolerances(), check: bool = True) -> CubatureRule:
    """Construct and certify the Gaussian rule of degree ``2m - 1``.

    Parameters
    ----------
    m : int
        Number of degree blocks; the rule has ``m(m+1)/2`` nodes.
    a, c : scalar
        Pencil parameters. Exact scalars keep the recurrence, Grams and
        moments exact until the float eigenvalue step.
    check : bool
        Run the exactness, Christoffel and vanishing certificates. A
        :class:`CubatureError` is raised on a Christoffel mismatch or when
        the scaled exactness error exceeds its tolerance.

    Raises
    ------
    RegimeError
        When some ``H_n`` with ``n <= m`` fails positive definiteness.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if is_exact(a) and is_exact(c):
        a, c = as_exact(a), as_exact(c)
    else:
        a, c = complex(a), complex(c)
    if a == 0 or c == 0:
        raise RegimeError(0, "a and c must be nonzero")
    deg = 2 * m - 1
    coeffs = _coeff_list(max(deg, m + 1), a, c)
    grams, bad = gram_recursive(m + 1, coeffs)
    if bad is not None:
        raise RegimeError(bad, "Gram recursion is inconsistent")
    orth = orthonormalize(coeffs[: m + 1], grams, tol)
    J = build_jacobi(m, orth, tol)
    comm = J.commutator()
    if comm > tol.commutator:
        raise CubatureError(f"commutator {comm:.3e} exceeds {tol.commutator:.1e}")
    nodes, V, resid = common_zeros(J, tol)
    rule = CubatureRule(m, a, c, nodes, weights(J, V), resid).sorted()
    nodes, w = rule.nodes, rule.weights
    diag = rule.diagnostics
    diag.update({
        "node_count": int(len(w)),
        "commutator": comm,
        "joint_residual": resid,
        "orthonormal_residual": orth.residual,
        "min_weight": float(w.min()),
        "weight_sum_error": float(abs(w.sum() - 1.0)),
        "min_separation": min_separation(nodes),
    })
    if check:
        family, _ = gen_Q(m, a, c)
        chris = christoffel_weights(nodes, family, orth, m)
        diag["christoffel_error"] = float(np.max(np.abs(chris - w) / w))
        moments = moment_table(deg, coeffs)
        diag["exactness_error"] = verify_exactness(nodes, w, moments, deg)
        diag["exactness_scaled"] = verify_exactness(nodes, w, moments, deg, scaled=True)
        diag["vanishing"] = polynomial_vanishing(nodes, family, m)
        if diag["christoffel_error"] > tol.christoffel:
            raise CubatureError(f"Christoffel mismatch {diag['christoffel_error']:.3e}")
        if diag["exactness_scaled"] > tol.exactness:
            raise CubatureError(f"exactness error {diag['exactness_scaled']:.3e}")
    return rule
