"""Acceptance criteria, one function each.

Every ``criterion_N`` returns ``(ok, detail)``. The pytest wrappers assert
``ok`` and record a PASS/FAIL line that is printed in the terminal summary;
running this file directly prints the same lines.
"""

from __future__ import annotations

import contextlib
import io
import time

import numpy as np
import pytest

from toeplitz_cubature.charpoly import (CharPencil, centrohermitian_toeplitz, check_reflection,
                                        det_laplace, eval_charpoly_I, q_via_determinant)
from toeplitz_cubature.cli import main as cli_main
from toeplitz_cubature.cubature import RegimeError, build_rule, deltoid_g
from toeplitz_cubature.families import (gen_chebyshev_U, gen_P, gen_Q, lemma41_expand,
                                        qac_coeffs, scale_cor36)
from toeplitz_cubature.moments import (gamma_consistency, gram_closed, gram_from_moments,
                                       gram_recursion_residuals, gram_recursive, moment_table,
                                       posdef_probe)
from toeplitz_cubature.scalars import GaussRational, parse_complex

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

IDENTITY_PARAMS = [("1", "1"), ("2", "1"), ("3/2", "1"), ("1+i", "-1-i")]
GRAM_PARAMS = [("1", "1"), ("3/2", "1"), ("1/2", "1")]


def P(text):
    return parse_complex(text, exact=True)


def _mat_equal(A, B):
    return A.shape == B.shape and all(x == y for x, y in zip(A.flat, B.flat))


def criterion_1():
    t0 = time.perf_counter()
    bad = []
    for a, c in IDENTITY_PARAMS:
        Q, _ = gen_Q(7, P(a), P(c))
        bad += [(a, c, m, k) for m in range(8) for k in range(m + 1)
                if q_via_determinant(m, k, P(a), P(c)) != Q.get(m, k)]
    dt = time.perf_counter() - t0
    return not bad and dt < 60, f"mismatches={len(bad)} runtime={dt:.2f}s (limit 60s)"


def criterion_2():
    bad = []
    for a, c in IDENTITY_PARAMS:
        Q, _ = gen_Q(7, P(a), P(c))
        Pf = gen_P(7, P(c))
        bad += [(a, c, m, k) for m in range(8) for k in range(m + 1)
                if lemma41_expand(m, k, P(a), P(c), Pf) != Q.get(m, k)]
    return not bad, f"mismatches={bad or 0}"


def criterion_3():
    U = gen_chebyshev_U(10)
    S1 = scale_cor36(gen_P(10, P("1")), P("1"))
    ok1 = all(S1.get(m, k) == U.get(m, k) for m in range(11) for k in range(m + 1))
    S2 = scale_cor36(gen_P(10, P("-1-i")), P("1+i"))
    ok2 = all(S2.get(m, k) == U.get(m, k) for m in range(11) for k in range(m + 1))
    return ok1 and ok2, f"a=c=1: {ok1}; a=1+i, c=-1-i: {ok2}"


def criterion_4():
    gram_ok, det_fail = True, []
    for a, c in GRAM_PARAMS:
        a, c = P(a), P(c)
        Q, _ = gen_Q(8, a, c)
        mt = moment_table(16, [qac_coeffs(n, a, c) for n in range(17)])
        gram_ok &= all(_mat_equal(gram_closed(n, a, c), gram_from_moments(n, Q, mt))
                       for n in range(9))
        aa, cc = a.abs2(), c.abs2()
        al = cc - (a - c).abs2()
        d = det_laplace(gram_from_moments(3, Q, mt).tolist(), GaussRational(0))
        if d != aa * al ** 2 * cc ** 3:
            det_fail.append(f"({a},{c}): det={d} vs |a|^2 alpha^2 |c|^6={aa * al ** 2 * cc ** 3}")
    detail = f"gram_closed == gram_from_moments: {gram_ok}; det H_3 formula: " + (
        "ok" if not det_fail else "FAILS " + "; ".join(det_fail))
    return gram_ok and not det_fail, detail


def criterion_5():
    worst = 0
    for a, c in IDENTITY_PARAMS + GRAM_PARAMS:
        a, c = P(a), P(c)
        co = [qac_coeffs(n, a, c) for n in range(9)]
        H, _ = gram_recursive(8, co)
        for n in range(1, 9):
            worst = max(worst, abs(gamma_consistency(n, co, H)),
                        *(abs(r) for r in gram_recursion_residuals(n, co, H)))
    return worst == 0, f"max residual={worst}"


def _rule_checks(m, a, c, exact_tol):
    rule = build_rule(m, P(a), P(c))
    d = rule.diagnostics
    n = m * (m + 1) // 2
    ok = (len(rule.weights) == n and rule.weights.min() > 0
          and d["exactness_error"] <= exact_tol and d["min_separation"] > 1e-8)
    return rule, ok


def criterion_6():
    t0 = time.perf_counter()
    parts, ok = [], True
    for m in (4, 8):
        rule, good = _rule_checks(m, "1", "1", 1e-9)
        d = rule.diagnostics
        g = float(deltoid_g(rule.nodes[:, 0] / 3, rule.nodes[:, 1] / 3).min())
        good &= d["commutator"] <= 1e-10 and abs(rule.weights.sum() - 1) <= 1e-12 and g >= -1e-9
        ok &= good
        parts.append(f"m={m}: n={len(rule.weights)} comm={d['commutator']:.1e} "
                     f"exact={d['exactness_error']:.1e} min g={g:.2e}")
    dt = time.perf_counter() - t0
    return ok and dt < 10, "; ".join(parts) + f"; runtime={dt:.2f}s"


def criterion_7():
    t0 = time.perf_counter()
    parts, ok = [], True
    for a in ("1/2", "3/2"):
        rule, good = _rule_checks(8, a, "1", 1e-8)
        ok &= good
        parts.append(f"a={a}: n={len(rule.weights)} exact={rule.diagnostics['exactness_error']:.1e}"
                     f" min w={rule.weights.min():.1e}")
    dt = time.perf_counter() - t0
    return ok and dt < 10, "; ".join(parts) + f"; runtime={dt:.2f}s"


def criterion_8():
    probe = posdef_probe(12, P("5/2"), P("1"))
    try:
        build_rule(8, P("5/2"), P("1"))
        lib = False
    except RegimeError:
        lib = True
    with contextlib.redirect_stderr(io.StringIO()), contextlib.redirect_stdout(io.StringIO()):
        code = cli_main(["cubature-verify", "--m", "8", "--a", "5/2", "--c", "1"])
    ok = probe is not None and probe <= 12 and lib and code == 1
    return ok, f"posdef_probe fails at n={probe}; library refusal={lib}; CLI exit={code}"


def criterion_9():
    rng = np.random.default_rng(20241018)
    worst = rel = 0.0
    for _ in range(50):
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 3))
        diags = {d: complex(*rng.normal(size=2)) for d in range(-(m - 1), m + n)}
        A = centrohermitian_toeplitz(m, n, diags)
        I = sorted(rng.choice(np.arange(1, m + n + 1), size=m, replace=False).tolist())
        pts = [tuple(complex(*rng.normal(size=2)) for _ in range(n + 1)) for _ in range(20)]
        for pt in pts:
            r = check_reflection(CharPencil(A), I, [pt])
            size = abs(eval_charpoly_I(CharPencil(A), I, [np.conj(v) for v in reversed(pt)]))
            worst, rel = max(worst, r), max(rel, r / max(size, 1.0))
    return worst <= 1e-12, f"max reflection residual={worst:.2e} (relative to |P_I|: {rel:.1e})"


def criterion_10():
    worst = 0.0
    for m, a in ((4, "1"), (8, "1"), (8, "1/2"), (8, "3/2")):
        worst = max(worst, build_rule(m, P(a), P("1")).diagnostics["vanishing"])
    return worst <= 1e-8, f"max |Q_k^m(node)| / max coeff = {worst:.2e}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


def _line(i, ok, detail):
    return f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("idx", range(1, len(CRITERIA) + 1))
def test_acceptance(idx):
    ok, detail = CRITERIA[idx - 1]()
    line = _line(idx, ok, detail)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    for i, fn in enumerate(CRITERIA, 1):
        print(_line(i, *fn()))
