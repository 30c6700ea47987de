import json
from pathlib import Path

import pytest

from plapcut.catalog import TRIANGLE_TOP
from plapcut.cli import main

GRAPHS = Path(__file__).resolve().parent.parent / "graphs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def lams(out):
    return sorted(round(e["lambda"], 6) for e in json.loads(out))


def test_spectrum_newton_triangle(capsys):
    code, out, _ = run(capsys, "spectrum", GRAPHS / "triangle.json", "--method", "newton",
                       "--seeds", 200, "--rng-seed", 1)
    assert code == 0
    values = sorted({round(v, 3) for v in lams(out)})
    assert values[:2] == [0.0, 9.0]
    assert any(abs(v - TRIANGLE_TOP) < 1e-3 for v in values)
    for e in json.loads(out):
        assert list(e) == ["lambda", "f", "residual"]


def test_spectrum_tree_path(capsys):
    code, out, _ = run(capsys, "spectrum", GRAPHS / "path2.json", "--method", "tree")
    assert code == 0
    assert lams(out) == [0.0, 8.0]


def test_spectrum_tree_on_cycle(capsys):
    code, _, err = run(capsys, "spectrum", GRAPHS / "triangle.json", "--method", "tree")
    assert code == 3 and "not a tree" in err


def test_spectrum_tree_on_cut_operator(capsys):
    code, out, _ = run(capsys, "spectrum", GRAPHS / "triangle_cut.json", "--method", "tree",
                       "--alpha", -1)
    assert code == 0
    assert 9.0 in lams(out)


def test_spectrum_is_deterministic(capsys):
    argv = ("spectrum", GRAPHS / "triangle.json", "--seeds", 40, "--rng-seed", 3)
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "spectrum", tmp_path / "nope.json")
    assert code == 2 and "cannot read" in err


def test_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "spectrum", bad)[0] == 2


def test_trace_triangle(capsys, tmp_path):
    csv_path, json_path = tmp_path / "c.csv", tmp_path / "c.json"
    code, out, err = run(capsys, "trace", GRAPHS / "triangle_cut.json", "--alpha-min", -3,
                         "--alpha-max", 3, "--points", 400, "--lambda-min", 5,
                         "--lambda-max", 40, "--out-csv", csv_path, "--out-json", json_path)
    assert code == 0 and out == ""
    assert csv_path.read_text().startswith("alpha,branch,lambda,slope\n")
    cps = [c for c in json.loads(json_path.read_text()) if c["certified"]]
    assert any(abs(c["lambda"] - 9) < 1e-8 and abs(c["alpha"] + 1) < 1e-8 for c in cps)
    assert any(abs(c["lambda"] - TRIANGLE_TOP) < 1e-4 and not c["regular"] for c in cps)
    assert "certified values" in err


def test_trace_monotone_window(capsys):
    code, out, _ = run(capsys, "trace", GRAPHS / "triangle_cut.json", "--alpha-min", 2,
                       "--alpha-max", 3, "--points", 100, "--lambda-min", 5,
                       "--lambda-max", 40)
    assert code == 0 and json.loads(out) == []


def test_trace_needs_cut(capsys):
    assert run(capsys, "trace", GRAPHS / "triangle.json", "--points", 10)[0] == 3


def test_trace_bad_ranges(capsys):
    f = GRAPHS / "triangle_cut.json"
    assert run(capsys, "trace", f, "--alpha-min", 2, "--alpha-max", 1)[0] == 2
    assert run(capsys, "trace", f, "--alpha-min", 1, "--alpha-max", 2,
               "--lambda-min", 3)[0] == 2


def test_hf_at_symmetric_point(capsys):
    code, out, _ = run(capsys, "hf", GRAPHS / "triangle_cut.json", "--alpha", -1,
                       "--lambda", 9)
    assert code == 0
    rep = json.loads(out)
    assert list(rep)[:4] == ["alpha", "lambda", "dlambda_dalpha", "fd_check"]
    assert rep["lambda"] == pytest.approx(9, abs=1e-9)
    assert abs(rep["dlambda_dalpha"]) < 1e-8 and abs(rep["fd_check"]) < 1e-5


def test_hf_matches_finite_difference(capsys):
    code, out, _ = run(capsys, "hf", GRAPHS / "triangle_cut.json", "--alpha", 0.5,
                       "--lambda", 11.4)
    assert code == 0
    rep = json.loads(out)
    assert rep["dlambda_dalpha"] == pytest.approx(rep["fd_check"], rel=1e-6)


def test_hf_rejects_zero_alpha(capsys):
    assert run(capsys, "hf", GRAPHS / "triangle_cut.json", "--alpha", 0,
               "--lambda", 9)[0] == 2


def test_hf_nothing_near_guess(capsys):
    assert run(capsys, "hf", GRAPHS / "triangle_cut.json", "--alpha", -1,
               "--lambda", 200, "--window", 1)[0] == 4


def test_regularity_examples(capsys):
    f = GRAPHS / "triangle.json"
    code, out, _ = run(capsys, "regularity", f, "--lambda", 9, "--f", "1,-1,0")
    rep = json.loads(out)
    assert code == 0 and rep["is_regular"] and rep["kernel_dim"] == 1
    code, out, _ = run(capsys, "regularity", f, "--lambda", 0, "--f", "1,1,1")
    rep = json.loads(out)
    assert code == 0 and not rep["is_regular"] and rep["kernel_dim"] == 3


def test_regularity_not_an_eigenpair(capsys):
    assert run(capsys, "regularity", GRAPHS / "triangle.json", "--lambda", 5,
               "--f", "1,-1,0")[0] == 4


def test_regularity_bad_vector(capsys):
    f = GRAPHS / "triangle.json"
    assert run(capsys, "regularity", f, "--lambda", 9, "--f", "1,-1")[0] == 2
    assert run(capsys, "regularity", f, "--lambda", 9, "--f", "1,x,0")[0] == 2
