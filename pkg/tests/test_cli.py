from __future__ import annotations

import json
import subprocess
import sys
from math import comb

import pytest

from siegeldual.cli import main
from siegeldual.exact import QQ
from siegeldual.serialize import from_json


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_siegel(capsys):
    code, out, _ = run(capsys, "gen", "--mode", "siegel", "--m", "3", "--k", "1,1,1,1", "--field", "q5t", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["entries"]) == 10 == comb(5, 3)
    _, again, _ = run(capsys, "gen", "--mode", "siegel", "--m", "3", "--k", "1,1,1,1", "--field", "q5t", "--seed", "7")
    assert again == out


def test_gen_lattice_m1(capsys):
    code, out, _ = run(capsys, "gen", "--mode", "lattice", "--m", "1", "--d", "1", "--r", "2", "--field", "Q")
    assert code == 0
    L = from_json(json.loads(out))
    assert (L.m, L.n, L.r) == (1, 1, 2)


def test_gen_retry_bound(capsys):
    # over F_2 a random 3x3 basis is singular often enough that one try can fail
    argv = ["gen", "--mode", "lattice", "--m", "1", "--d", "1,1,1", "--r", "3", "--field", "F2", "--retries", "1"]
    code, _, err = run(capsys, *argv, "--seed", "0")
    assert code == 1 and "spanning condition" in err
    assert run(capsys, *argv, "--seed", "1")[0] == 0


@pytest.mark.parametrize("argv", [
    ["gen", "--mode", "siegel"],
    ["gen", "--mode", "siegel", "--m", "2", "--k", "1,1"],
    ["gen", "--mode", "lattice"],
    ["gen", "--field", "nonsense", "--k", "1,1"],
    ["verify", "--trials", "0"],
    ["verify", "--m", "2", "--k", "1,1"],
    ["nosuchcommand"],
    ["gen", "--k", "a,b"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_dualize_m1(capsys, monkeypatch, tmp_path):
    code, out, _ = run(capsys, "gen", "--m", "1", "--k", "2,3", "--field", "Q", "--seed", "1")
    S = from_json(json.loads(out))
    path = tmp_path / "s.json"
    path.write_text(out)
    code, dual, _ = run(capsys, "dualize", str(path))
    assert code == 0
    Sb = from_json(json.loads(dual))
    assert Sb[1, 0, 2, 0] == -S[1, 0, 2, 0].T
    code, dual2, _ = run(capsys, "dualize", stdin=out, monkeypatch=monkeypatch)
    assert dual2 == dual


def test_p_and_extract_and_roundtrip(capsys, tmp_path):
    _, lat, _ = run(capsys, "gen", "--mode", "lattice", "--m", "2", "--d", "2,1,0", "--field", "F13t", "--seed", "4")
    path = tmp_path / "l.json"
    path.write_text(lat)
    code, sj, _ = run(capsys, "extract", str(path))
    assert code == 0 and json.loads(sj)["k"] == [1, 1, 1]
    code, pj, _ = run(capsys, "p", str(path))
    assert code == 0 and json.loads(pj)["type"] == "ptable"
    spath = tmp_path / "s.json"
    spath.write_text(sj)
    _, pj2, _ = run(capsys, "p", str(spath))
    assert pj2 == pj
    code, rj, _ = run(capsys, "roundtrip", str(path), "--out", str(tmp_path / "r.json"))
    rep = json.loads((tmp_path / "r.json").read_text())
    assert code == 0 and rep["status"] in ("pass", "inadmissible")


def test_extract_span_failure(capsys, tmp_path):
    doc = {"type": "lattice", "field": "Q", "m": 2, "d": [2, 1, 0],
           "basis": [["0", "0", "0"]] * 3}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "extract", str(path))
    assert code == 1 and "SpanFailure" in err


def test_malformed_input(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    assert run(capsys, "dualize", str(path))[0] == 2
    assert run(capsys, "dualize", str(tmp_path / "missing.json"))[0] == 2
    path.write_text(json.dumps({"type": "series", "field": "Q", "order": 1, "coefficients": {}}))
    assert run(capsys, "dualize", str(path))[0] == 2


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "1/T", "--order", "3")
    assert code == 0
    doc = json.loads(out)
    F = from_json(doc).field
    assert sorted(int(j) for j in doc["coefficients"]) == [0, 1, 2, 3]
    for i in range(4):
        assert F.coerce(doc["coefficients"][str(i)]) == F.coerce(f"{(-1) ** i}/theta^{i + 1}")


def test_expand_bad_expression(capsys):
    assert main(["expand", "1/(T-T)"]) == 1
    assert main(["expand", "1/(T-"]) == 2


def test_verify(capsys, tmp_path):
    code, out, err = run(capsys, "verify", "--m", "3", "--trials", "5", "--field", "rationals", "--seed", "1", "--no-timing")
    assert code == 0 and err.startswith("pass")
    rep = json.loads(out)
    assert rep["summary"]["fail"] == 0
    assert len(rep["results"]) == 5 * 9
    _, again, _ = run(capsys, "verify", "--m", "3", "--trials", "5", "--field", "rationals", "--seed", "1", "--no-timing")
    assert again == out


def test_verify_m1_and_zero_segments(capsys):
    code, out, _ = run(capsys, "verify", "--m", "1", "--trials", "4")
    assert code == 0
    rows = [r for r in json.loads(out)["results"] if r["check"] == "m1_closed_form"]
    assert all(r["status"] == "pass" for r in rows)
    code, out, _ = run(capsys, "verify", "--k", "0,2,0,1", "--m", "3", "--trials", "2")
    assert code == 0
    assert json.loads(out)["config"]["k"] == [0, 2, 0, 1]


def test_verify_parallel_matches_serial(capsys):
    args = ["verify", "--m", "2", "--trials", "4", "--no-timing", "--checks", "recurrence", "b_bbar"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "2")
    assert serial == parallel


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "siegeldual", "gen", "--m", "1", "--k", "1,1", "--field", "Q"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert from_json(json.loads(proc.stdout)).field == QQ
    proc = subprocess.run([sys.executable, "-m", "siegeldual", "verify", "--trials", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
