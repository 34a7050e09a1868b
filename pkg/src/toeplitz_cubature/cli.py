"""Command-line front end.

Exit codes: 0 success, 1 mathematical failure or regime refusal, 2 usage error.
``CUBATURE_EXACT=0`` switches parameter parsing to floating point; the
default is exact rational arithmetic.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

import numpy as np

from .charpoly import q_via_determinant
from .cubature import CubatureError, RegimeError, Tolerances, build_rule, verify_exactness
from .families import gen_chebyshev_U, gen_P, gen_Q, lemma41_expand, qac_coeffs, scale_cor36
from .moments import (ParamRegime, gamma_consistency, gram_closed, gram_from_moments,
                      gram_recursion_residuals, moment_table, param_classify, posdef_probe)
from .poly import conj_reflect
from .ruleio import deltoid_boundary, read_rule, rule_to_csv, rule_to_json, rule_to_svg
from .scalars import format_complex, is_exact, parse_complex

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _exact_default() -> bool:
    v = os.environ.get("CUBATURE_EXACT", "1").strip()
    if v not in ("0", "1"):
        raise UsageError(f"CUBATURE_EXACT must be 0 or 1, got {v!r}")
    return v == "1"


def _param(text: str, name: str, exact: bool):
    try:
        return parse_complex(text, exact=exact)
    except ValueError as e:
        raise UsageError(f"--{name}: {e}") from None


def _params(args, exact: bool, nonzero: bool = True):
    a, c = _param(args.a, "a", exact), _param(args.c, "c", exact)
    if nonzero and (a == 0 or c == 0):
        raise UsageError("a and c must be nonzero")
    return a, c


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _tolerances(args) -> Tolerances:
    base = Tolerances()
    kw = {}
    for name in ("exactness", "commutator", "joint", "christoffel"):
        v = getattr(args, f"tol_{name}", None)
        kw[name] = base.__dict__[name] if v is None else v
    return Tolerances(**kw, orthonormal=base.orthonormal, symmetry=base.symmetry,
                      posdef=base.posdef)


def _chebyshev_case(a, c) -> bool:
    """``a == c`` and ``c |a|^2 == conj(a)^3``: the family rescales to Chebyshev U."""
    if a != c:
        return False
    ab = a.conjugate()
    if is_exact(a) and is_exact(c):
        return c * a * ab == ab * ab * ab
    return abs(complex(c) * abs(complex(a)) ** 2 - complex(ab) ** 3) <= 1e-12 * abs(complex(a)) ** 3


def _same(p, q, exact: bool, tol: float) -> bool:
    return p == q if exact else p.allclose(q, tol)


# --------------------------------------------------------------------------
# identities


def cmd_identities(args) -> int:
    exact = _exact_default()
    a, c = _params(args, exact)
    M = args.m_max
    if M < 0:
        raise UsageError("--m-max must be >= 0")
    tol = args.tol_identity
    t0 = time.perf_counter()
    checks = {}
    Q, _ = gen_Q(M, a, c)
    P = gen_P(M, c)

    bad = [[m, k] for m in range(M + 1) for k in range(m + 1)
           if not _same(q_via_determinant(m, k, a, c), Q.get(m, k), exact, tol)]
    checks["determinant_vs_recurrence"] = {"pass": not bad, "failures": bad}

    bad = [[m, k] for m in range(M + 1) for k in range(m + 1)
           if not _same(lemma41_expand(m, k, a, c, P), Q.get(m, k), exact, tol)]
    checks["expansion_in_P"] = {"pass": not bad, "failures": bad}

    bad = [[m, k] for m in range(M + 1) for k in range(m + 1)
           if not _same(conj_reflect(Q.get(m, k)), Q.get(m, m - k), exact, tol)]
    checks["reflection"] = {"pass": not bad, "failures": bad}

    if _chebyshev_case(a, c):
        U = gen_chebyshev_U(M, exact)
        S = scale_cor36(P, a)
        bad = [[m, k] for m in range(M + 1) for k in range(m + 1)
               if not _same(S.get(m, k), U.get(m, k), exact, tol)]
        checks["chebyshev_reduction"] = {"pass": not bad, "failures": bad}
    else:
        checks["chebyshev_reduction"] = {"pass": True, "skipped": "needs a == c == conj(a)^3/|a|^2"}

    coeffs = [qac_coeffs(n, a, c) for n in range(2 * M + 1)]
    mt = moment_table(2 * M, coeffs)
    grams = [gram_from_moments(n, Q, mt) for n in range(M + 1)]

    def close(x, y):
        if exact:
            return all(u == v for u, v in zip(x.flat, y.flat))
        return np.allclose(np.asarray(x, complex), np.asarray(y, complex), atol=tol)

    bad = [n for n in range(M + 1) if not close(gram_closed(n, a, c), grams[n])]
    checks["gram_closed_vs_moments"] = {"pass": not bad, "failures": bad}
    resid = 0.0
    for n in range(1, M + 1):
        resid = max(resid, float(abs(gamma_consistency(n, coeffs, grams))),
                    *(float(abs(r)) for r in gram_recursion_residuals(n, coeffs, grams)))
    checks["gram_relations"] = {"pass": resid <= (0 if exact else tol), "max_residual": resid}

    ok = all(v["pass"] for v in checks.values())
    report = {
        "a": format_complex(a), "c": format_complex(c), "m_max": M,
        "mode": "exact" if exact else "float",
        "regime": param_classify(a, c).value,
        "checks": checks,
        "all_pass": ok,
        "seconds": round(time.perf_counter() - t0, 3),
    }
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# family and moments


def cmd_family(args) -> int:
    exact = _exact_default()
    a, c = _params(args, exact, nonzero=False)
    if args.m_max < 0:
        raise UsageError("--m-max must be >= 0")
    Q, _ = gen_Q(args.m_max, a, c)
    rows = []
    for m in range(args.m_max + 1):
        for k in range(m + 1):
            for (j, l), v in sorted(Q.get(m, k).items()):
                rows.append((m, k, j, l, format_complex(v)))
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "k", "zpow", "zbarpow", "coeff"])
        w.writerows(rows)
        text = buf.getvalue()
    else:
        doc = {"a": format_complex(a), "c": format_complex(c), "kind": Q.kind,
               "terms": [{"m": m, "k": k, "zpow": j, "zbarpow": l, "coeff": v}
                         for m, k, j, l, v in rows]}
        text = json.dumps(doc, indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_moments(args) -> int:
    exact = _exact_default()
    a, c = _params(args, exact, nonzero=False)
    D = args.m_max
    if D < 0:
        raise UsageError("--m-max must be >= 0")
    mt = moment_table(D, [qac_coeffs(n, a, c) for n in range(D + 1)])
    rows = [(j, k, format_complex(mt[j, k])) for j in range(D + 1) for k in range(D + 1 - j)]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "k", "moment"])
        w.writerows(rows)
        text = buf.getvalue()
    else:
        doc = {"a": format_complex(a), "c": format_complex(c), "degree": D,
               "moments": [{"j": j, "k": k, "value": v} for j, k, v in rows]}
        text = json.dumps(doc, indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# rules


def _refusal(a, c, m: int, detail: str | None = None) -> int:
    probe = posdef_probe(max(m, 12), a, c)
    msg = {"error": "regime", "regime": param_classify(a, c).value,
           "posdef_fails_at": probe,
           "detail": detail or "parameters outside the Gaussian region; use --force to try anyway"}
    sys.stderr.write(json.dumps(msg) + "\n")
    return EXIT_FAIL


def _rule_or_refuse(args, check: bool):
    exact = _exact_default()
    a, c = _params(args, exact)
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    regime = param_classify(a, c)
    if regime is not ParamRegime.GAUSSIAN_VALID and not args.force:
        return None, _refusal(a, c, args.m)
    try:
        rule = build_rule(args.m, a, c, tol=_tolerances(args), check=check)
    except RegimeError as e:
        return None, _refusal(a, c, args.m, str(e))
    except CubatureError as e:
        sys.stderr.write(json.dumps({"error": "certificate", "detail": str(e)}) + "\n")
        return None, EXIT_FAIL
    extra = {"regime": regime.value}
    if args.force and regime is not ParamRegime.GAUSSIAN_VALID:
        extra["forced"] = True
    return (rule, extra), EXIT_OK


def cmd_nodes(args) -> int:
    res, code = _rule_or_refuse(args, check=True)
    if res is None:
        return code
    rule, extra = res
    text = rule_to_csv(rule, extra) if args.format == "csv" else rule_to_json(rule, extra)
    _emit(text, args.out)
    return EXIT_OK


def _boundary(a, c):
    """Deltoid dilated by ``3 conj(a)`` when ``a == c`` is a Chebyshev case."""
    if not _chebyshev_case(a, c):
        return None
    return deltoid_boundary(complex(a).conjugate(), samples=360)


def cmd_plot(args) -> int:
    res, code = _rule_or_refuse(args, check=True)
    if res is None:
        return code
    rule, _ = res
    title = f"m={rule.m} a={format_complex(rule.a)} c={format_complex(rule.c)}"
    _emit(rule_to_svg(rule.nodes, _boundary(rule.a, rule.c), title=title), args.out)
    return EXIT_OK


def _verify_file(args, tol: Tolerances) -> int:
    try:
        with open(args.rule, encoding="utf-8") as fh:
            data = read_rule(fh.read())
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"--rule: {e}") from None
    m = data.get("m", args.m)
    a = data.get("a", None)
    c = data.get("c", None)
    if m is None or a is None or c is None:
        raise UsageError("rule file lacks m, a or c metadata")
    deg = 2 * m - 1
    mt = moment_table(deg, [qac_coeffs(n, a, c) for n in range(deg + 1)])
    nodes, w = data["nodes"], data["weights"]
    report = {
        "m": m, "a": format_complex(a), "c": format_complex(c), "source": args.rule,
        "node_count": int(len(w)),
        "exactness_error": verify_exactness(nodes, w, mt, deg),
        "exactness_scaled": verify_exactness(nodes, w, mt, deg, scaled=True),
        "min_weight": float(w.min()),
        "weight_sum_error": float(abs(w.sum() - 1.0)),
    }
    ok = (report["exactness_error"] <= tol.exactness and report["min_weight"] > 0
          and report["node_count"] == m * (m + 1) // 2)
    report["pass"] = ok
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    tol = _tolerances(args)
    if args.rule:
        return _verify_file(args, tol)
    if args.m is None:
        raise UsageError("--m is required unless --rule is given")
    res, code = _rule_or_refuse(args, check=False)
    if res is None:
        return code
    rule, extra = res
    deg = rule.degree
    mt = moment_table(deg, [qac_coeffs(n, rule.a, rule.c) for n in range(deg + 1)])
    d = dict(rule.diagnostics)
    d["exactness_error"] = verify_exactness(rule.nodes, rule.weights, mt, deg)
    d["exactness_scaled"] = verify_exactness(rule.nodes, rule.weights, mt, deg, scaled=True)
    checks = {
        "exactness": d["exactness_error"] <= tol.exactness,
        "commutator": d["commutator"] <= tol.commutator,
        "joint_residual": d["joint_residual"] <= tol.joint,
        "positive_weights": d["min_weight"] > 0,
        "weight_sum": d["weight_sum_error"] <= 1e-12,
        "node_count": d["node_count"] == rule.m * (rule.m + 1) // 2,
    }
    report = {"m": rule.m, "a": format_complex(rule.a), "c": format_complex(rule.c),
              **extra, **{k: (float(v) if isinstance(v, float) else v) for k, v in d.items()},
              "checks": checks, "pass": all(checks.values())}
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toeplitz-cubature",
                description="Orthogonal polynomials from Toeplitz pencils and their cubature rules.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, m_flag: str, fmt=("json", "csv"), default_fmt="json", m_required=True):
        if m_flag == "m":
            sp.add_argument("--m", type=int, required=m_required,
                            help="degree parameter; the rule has m(m+1)/2 nodes")
        else:
            sp.add_argument("--m-max", type=int, required=True, help="largest degree")
        sp.add_argument("--a", default="1", help="complex literal, e.g. 3/2 or 1+i")
        sp.add_argument("--c", default="1", help="complex literal")
        sp.add_argument("--format", choices=fmt, default=default_fmt)
        sp.add_argument("--out", help="output path (default stdout)")

    def tols(sp):
        sp.add_argument("--tol-exactness", type=float, default=None)
        sp.add_argument("--tol-commutator", type=float, default=None)
        sp.add_argument("--tol-joint", type=float, default=None)
        sp.add_argument("--tol-christoffel", type=float, default=None)
        sp.add_argument("--force", action="store_true",
                        help="attempt construction outside the Gaussian region")

    sp = sub.add_parser("identities", help="run the exact identity suites")
    common(sp, "m_max", fmt=("json",))
    sp.add_argument("--tol-identity", type=float, default=1e-10,
                    help="comparison tolerance when CUBATURE_EXACT=0")
    sp.set_defaults(func=cmd_identities)

    sp = sub.add_parser("family", help="dump Q_k^m coefficients")
    common(sp, "m_max")
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("moments", help="moment table L(z^j zbar^k), j + k <= m-max")
    common(sp, "m_max")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("nodes", help="nodes and weights of the Gaussian rule")
    common(sp, "m", default_fmt="csv")
    tols(sp)
    sp.set_defaults(func=cmd_nodes)

    sp = sub.add_parser("cubature-verify", help="build a rule (or read --rule) and check it")
    common(sp, "m", fmt=("json",), m_required=False)
    tols(sp)
    sp.add_argument("--rule", help="verify an existing CSV or JSON rule file")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("plot", help="SVG scatter of the nodes")
    common(sp, "m", fmt=("svg",), default_fmt="svg")
    tols(sp)
    sp.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
