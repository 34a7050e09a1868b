"""Rule files (CSV, JSON) and SVG node plots."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .cubature import CubatureRule
from .scalars import format_complex, parse_complex

__all__ = ["deltoid_boundary", "read_rule", "rule_to_csv", "rule_to_json", "rule_to_svg"]

CSV_HEADER = ("x", "y", "weight")


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    return v


def _metadata(rule: CubatureRule, extra: dict | None = None) -> dict:
    meta = {"m": rule.m, "a": format_complex(rule.a), "c": format_complex(rule.c)}
    meta.update({k: _jsonable(v) for k, v in rule.diagnostics.items()})
    if extra:
        meta.update(extra)
    return meta


def rule_to_csv(rule: CubatureRule, extra: dict | None = None) -> str:
    """Header ``x,y,weight``, one row per node, then ``# key=value`` metadata lines.

    Values are written with ``repr`` so a file read back reproduces the
    floats bit for bit.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for (x, y), lam in zip(rule.nodes, rule.weights):
        w.writerow([repr(float(x)), repr(float(y)), repr(float(lam))])
    for k, v in _metadata(rule, extra).items():
        buf.write(f"# {k}={v}\n")
    return buf.getvalue()


def rule_to_json(rule: CubatureRule, extra: dict | None = None) -> str:
    meta = _metadata(rule, extra)
    doc = {
        "m": meta.pop("m"),
        "a": meta.pop("a"),
        "c": meta.pop("c"),
        "nodes": [[float(x), float(y)] for x, y in rule.nodes],
        "weights": [float(v) for v in rule.weights],
        "diagnostics": meta,
    }
    return json.dumps(doc, indent=2) + "\n"


def read_rule(text: str) -> dict:
    """Parse CSV or JSON rule text.

    Returns a dict with ``nodes`` (N x 2), ``weights`` and whatever of
    ``m``, ``a``, ``c`` the file records (``a`` and ``c`` exact when they
    parse that way).
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        out = {"nodes": np.asarray(doc["nodes"], dtype=float).reshape(-1, 2),
               "weights": np.asarray(doc["weights"], dtype=float),
               "m": int(doc["m"]), "a": doc["a"], "c": doc["c"]}
    else:
        lines = text.splitlines()
        body = [ln for ln in lines if ln and not ln.startswith("#")]
        rows = list(csv.reader(body))
        if not rows or tuple(rows[0]) != CSV_HEADER:
            raise ValueError("CSV rule must start with header x,y,weight")
        data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float).reshape(-1, 3)
        out = {"nodes": data[:, :2], "weights": data[:, 2]}
        for ln in lines:
            if ln.startswith("# ") and "=" in ln:
                k, v = ln[2:].split("=", 1)
                if k in ("m", "a", "c"):
                    out[k] = int(v) if k == "m" else v
    for k in ("a", "c"):
        if k in out:
            try:
                out[k] = parse_complex(out[k], exact=True)
            except ValueError:
                out[k] = parse_complex(out[k], exact=False)
    return out


def deltoid_boundary(scale: complex, samples: int = 360) -> np.ndarray:
    """``scale * (2 e^{it} + e^{-2it})`` for ``samples`` equispaced ``t``, closed."""
    t = np.linspace(0.0, 2 * math.pi, samples + 1)
    w = scale * (2 * np.exp(1j * t) + np.exp(-2j * t))
    return np.column_stack([w.real, w.imag])


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def rule_to_svg(nodes: np.ndarray, boundary: np.ndarray | None = None, size: int = 480,
                title: str = "") -> str:
    """SVG 1.1 scatter of ``nodes`` centred at the origin, optional boundary polyline."""
    pts = np.asarray(nodes, dtype=float).reshape(-1, 2)
    extent = float(np.abs(pts).max()) if pts.size else 0.0
    if boundary is not None:
        extent = max(extent, float(np.abs(boundary).max()))
    extent = 1.1 * extent if extent > 0 else 1.0
    half = size / 2
    k = (half - 10) / extent

    def to_px(x, y):
        return half + k * x, half - k * y

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
    ]
    if title:
        out.append(f"  <title>{title}</title>")
    out.append(f'  <rect x="0" y="0" width="{size}" height="{size}" fill="white"/>')
    if boundary is not None:
        coords = " ".join("{},{}".format(*map(_fmt, to_px(x, y))) for x, y in boundary)
        out.append(f'  <polyline points="{coords}" fill="none" stroke="black" stroke-width="1"/>')
    for x, y in pts:
        cx, cy = to_px(x, y)
        out.append(f'  <circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
