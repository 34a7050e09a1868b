import json

import numpy as np
import pytest

from toeplitz_cubature.cli import main
from toeplitz_cubature.ruleio import read_rule


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_identities_pass(capsys):
    code, out, _ = run(capsys, "identities", "--m-max", "6", "--a", "2", "--c", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["all_pass"] and rep["mode"] == "exact"


def test_identities_chebyshev_checked(capsys):
    code, out, _ = run(capsys, "identities", "--m-max", "6", "--a", "1", "--c", "1")
    assert code == 0
    assert json.loads(out)["checks"]["chebyshev_reduction"] == {"pass": True, "failures": []}


@pytest.mark.parametrize("argv", [
    ["identities", "--m-max", "0", "--a", "0", "--c", "1"],
    ["identities", "--m-max", "2", "--a", "1+x"],
    ["nodes", "--m", "0"],
    ["nodes"],
    ["frobnicate"],
    ["nodes", "--m", "3", "--format", "xml"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_float_mode(capsys, monkeypatch):
    monkeypatch.setenv("CUBATURE_EXACT", "0")
    code, out, _ = run(capsys, "identities", "--m-max", "4", "--a", "1.5", "--c", "1")
    assert code == 0 and json.loads(out)["mode"] == "float"
    monkeypatch.setenv("CUBATURE_EXACT", "yes")
    assert run(capsys, "moments", "--m-max", "2")[0] == 2


def test_nodes_csv(capsys):
    code, out, _ = run(capsys, "nodes", "--m", "8", "--a", "1", "--c", "1", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,y,weight"
    rows = [ln for ln in lines[1:] if not ln.startswith("#")]
    assert len(rows) == 36


def test_nodes_m1(capsys):
    code, out, _ = run(capsys, "nodes", "--m", "1")
    assert out.splitlines()[1] == "0.0,0.0,1.0"


def test_nodes_json(capsys):
    code, out, _ = run(capsys, "nodes", "--m", "3", "--a", "3/2", "--format", "json")
    doc = json.loads(out)
    assert set(doc) == {"m", "a", "c", "nodes", "weights", "diagnostics"}
    assert doc["a"] == "3/2" and len(doc["nodes"]) == 6


def test_nodes_refusal(capsys):
    code, _, err = run(capsys, "nodes", "--m", "8", "--a", "5/2", "--c", "1")
    assert code == 1
    assert json.loads(err)["posdef_fails_at"] == 2


def test_force_outside_classified_region(capsys):
    assert run(capsys, "nodes", "--m", "4", "--a", "19/10")[0] == 1
    code, out, _ = run(capsys, "nodes", "--m", "4", "--a", "19/10", "--force", "--format", "json")
    assert code == 0
    assert json.loads(out)["diagnostics"]["forced"] is True
    assert run(capsys, "nodes", "--m", "4", "--a", "5/2", "--force")[0] == 1


def test_verify(capsys):
    code, out, _ = run(capsys, "cubature-verify", "--m", "4", "--a", "1", "--c", "1")
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and rep["exactness_error"] <= 1e-10
    assert run(capsys, "cubature-verify", "--m", "8", "--a", "1/2", "--c", "1")[0] == 0
    code, _, err = run(capsys, "cubature-verify", "--m", "8", "--a", "5/2", "--c", "1")
    assert code == 1 and "not positive definite" in err or "regime" in err


def test_verify_tolerance_breach(capsys):
    code, out, _ = run(capsys, "cubature-verify", "--m", "6", "--a", "3/2",
                       "--tol-exactness", "1e-30")
    assert code == 1 and not json.loads(out)["checks"]["exactness"]


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_rule_file_roundtrip(capsys, tmp_path, fmt):
    path = tmp_path / f"rule.{fmt}"
    assert run(capsys, "nodes", "--m", "6", "--a", "1/2", "--format", fmt, "--out", str(path))[0] == 0
    text = path.read_text()
    data = read_rule(text)
    if fmt == "csv":
        meta = dict(ln[2:].split("=", 1) for ln in text.splitlines() if ln.startswith("# "))
        reported = float(meta["exactness_error"])
    else:
        reported = json.loads(text)["diagnostics"]["exactness_error"]
    code, out, _ = run(capsys, "cubature-verify", "--rule", str(path))
    assert code == 0
    assert abs(json.loads(out)["exactness_error"] - reported) <= 1e-12
    assert data["nodes"].shape == (21, 2)


def test_deterministic_output(capsys):
    first = run(capsys, "nodes", "--m", "5", "--a", "3/2")[1]
    second = run(capsys, "nodes", "--m", "5", "--a", "3/2")[1]
    assert first == second


def test_plot_with_boundary(capsys, tmp_path):
    path = tmp_path / "fig.svg"
    assert run(capsys, "plot", "--m", "8", "--a", "1", "--c", "1", "--out", str(path))[0] == 0
    svg = path.read_text()
    assert svg.count("<circle") == 36
    assert 'version="1.1"' in svg
    pts = svg.split('<polyline points="')[1].split('"')[0].split()
    assert len(pts) >= 360


def test_plot_without_boundary(capsys):
    code, out, _ = run(capsys, "plot", "--m", "8", "--a", "3/2", "--c", "1")
    assert code == 0 and out.count("<circle") == 36 and "polyline" not in out


def test_plot_single_node_centered(capsys):
    out = run(capsys, "plot", "--m", "1")[1]
    assert '<circle cx="240.000" cy="240.000"' in out


def test_plot_rotated_deltoid(capsys):
    # a == c == i rescales to the Chebyshev family; boundary is conj(a) times the deltoid
    code, out, _ = run(capsys, "plot", "--m", "4", "--a", "i", "--c", "i", "--force")
    assert code == 0 and "polyline" in out


def test_family_and_moments(capsys):
    code, out, _ = run(capsys, "family", "--m-max", "2", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "m,k,zpow,zbarpow,coeff"
    code, out, _ = run(capsys, "moments", "--m-max", "3", "--a", "3/2")
    doc = json.loads(out)
    mu = {(r["j"], r["k"]): r["value"] for r in doc["moments"]}
    assert mu[(0, 0)] == "1" and mu[(1, 1)] == "9/4" and mu[(0, 3)] == "27/8"
