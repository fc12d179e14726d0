import json

import pytest

from lambdaops.cli import main


def binary(x, y):
    return {
        "kind": "binary",
        "dimension": 1,
        "ranks": {"0": 1, "1": 1},
        "differentials": {"d": {"1": {"1": [[x]]}}, "d_tilde": {"1": {"1": [[y]]}}},
    }


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, obj in {"b11": binary(1, 1), "b23": binary(2, 3)}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        paths[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 1, "ranks": ')
    paths["bad"] = str(bad)
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


def test_reproduce_all_passes(capsys):
    code, rep = run_json(capsys, "reproduce", "all")
    assert code == 0
    assert rep["status"] == "pass"
    assert len(rep["records"]) >= 5
    assert all(r["status"] == "pass" for r in rep["records"])


def test_reproduce_counterexample(capsys):
    code, rep = run_json(capsys, "reproduce", "ex-counterexample")
    assert code == 0
    rec = rep["records"][0]
    assert rec["status"] == "pass" and rec["computed"] == rec["expected"]


def test_reproduce_invertible_r3_x5(capsys):
    code, rep = run_json(capsys, "reproduce", "ex-invertible", "--r", "3", "--x", "5")
    assert code == 0
    assert len(rep["records"]) == 1
    assert rep["records"][0]["status"] == "pass"
    assert "5" in json.dumps(rep["records"][0]["computed"])


def test_unknown_target_is_input_error(capsys):
    code, out, err = run(capsys, "reproduce", "ex-nothing")
    assert code == 2 and "unknown target" in err


def test_bad_arguments_exit_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "plethysm", "0", "2")[0] == 2
    assert run(capsys, "lambda-check", "--max-degree", "9")[0] == 2


def test_derive_malformed_json(capsys, files):
    code, out, err = run(capsys, "derive", files["bad"], "--spec", "L2")
    assert code == 2 and "invalid JSON" in err


def test_derive_missing_file(capsys, files):
    assert run(capsys, "derive", str(files["dir"] / "nope.json"), "--spec", "L2")[0] == 2


def test_derive_bad_spec(capsys, files):
    assert run(capsys, "derive", files["b11"], "--spec", "L2+")[0] == 2


def test_derive_invalid_complex_names_cell(capsys, tmp_path):
    obj = {"dimension": 1, "ranks": {"0": 1, "1": 1, "2": 1}, "differentials": {"d": {"1": {"1": [[1]], "2": [[1]]}}}}
    p = tmp_path / "notcx.json"
    p.write_text(json.dumps(obj))
    code, out, err = run(capsys, "derive", str(p), "--spec", "L1")
    assert code == 2 and "cell" in err


def test_derive_lambda2_of_binary_identity(capsys, files):
    code, rep = run_json(capsys, "derive", files["b11"], "--spec", "L2")
    assert code == 0
    cx = rep["result"]["complex"]
    assert cx["kind"] == "binary"
    assert cx["ranks"] == {"1": 1, "2": 1}
    ver = rep["result"]["verification"]
    assert ver["acyclic"] and ver["length"] == 2 and ver["length_bound"] == 2


def test_derive_identity_functor(capsys, files):
    code, rep = run_json(capsys, "derive", files["b11"], "--spec", "L1")
    assert code == 0
    assert rep["result"]["complex"]["ranks"] == {"0": 1, "1": 1}
    assert rep["result"]["verification"]["acyclic"]


def test_homology(capsys, files):
    code, rep = run_json(capsys, "homology", files["b23"])
    assert code == 0
    h = rep["result"]["homology"]
    assert h["d"]["0"]["torsion"] == [2]
    assert h["d_tilde"]["0"]["torsion"] == [3]
    assert rep["result"]["acyclic"] is False


def test_witness_shift_needs_flag_for_non_acyclic(capsys, files):
    code, out, err = run(capsys, "witness", "gen", "shift", files["b23"])
    assert code == 2 and "--skip-acyclicity" in err


def test_witness_roundtrip_and_tamper(capsys, files):
    w = str(files["dir"] / "w.json")
    code, out, err = run(capsys, "witness", "gen", "shift", files["b23"], "--skip-acyclicity", "-o", w)
    assert code == 0
    code, rep = run_json(capsys, "witness", "check", w, "--skip-acyclicity")
    assert code == 0 and rep["result"]["valid"]

    data = json.load(open(w))
    key, obj = next((k, o) for k, o in sorted(data["objects"].items()) if o["differentials"]["d"]["1"])
    cell, mat = next(iter(obj["differentials"]["d"]["1"].items()))
    mat["entries"][0][0] += 1
    bad = str(files["dir"] / "bad_w.json")
    json.dump(data, open(bad, "w"))
    code, rep = run_json(capsys, "witness", "check", bad, "--skip-acyclicity")
    assert code == 1
    assert not rep["result"]["valid"]
    assert rep["result"]["first_failure"]


def test_witness_product_on_diagonal_pair(capsys, files):
    code, data = run_json(capsys, "witness", "gen", "product", files["b11"], files["b11"])
    assert code == 0
    assert len(data["relations"]) == 1
    assert data["relations"][0]["kind"] == "diagonal"


def test_reports_are_deterministic(capsys, files):
    def strip(rep):
        rep.pop("wall_time_s")
        return rep

    a = strip(run_json(capsys, "reproduce", "ex-shift", "--seed", "4")[1])
    b = strip(run_json(capsys, "reproduce", "ex-shift", "--seed", "4")[1])
    assert a == b and a["seed"] == 4
    a = run(capsys, "witness", "gen", "shift", files["b23"], "--skip-acyclicity")[1]
    b = run(capsys, "witness", "gen", "shift", files["b23"], "--skip-acyclicity")[1]
    assert a == b


def test_plethysm(capsys):
    code, rep = run_json(capsys, "plethysm", "2", "2")
    assert code == 0
    assert rep["result"]["text"] == "X1*X3 - X4"


def test_lambda_check(capsys):
    code, rep = run_json(capsys, "lambda-check", "--max-degree", "4")
    assert code == 0 and rep["status"] == "pass"


def test_text_format(capsys):
    code, out, err = run(capsys, "plethysm", "2", "3", "--format", "text")
    assert code == 0
    assert "overall: PASS" in out
    assert "-X1*X5 + X2*X4 + X6" in out


def test_selftest(capsys):
    code, rep = run_json(capsys, "selftest", "--seed", "1")
    assert code == 0 and rep["status"] == "pass"
