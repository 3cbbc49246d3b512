import json

import pytest

from qaffine.cli import BudgetError, Manifest, main, read_config


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_crystal_dot(tmp_path, capsys):
    dot = tmp_path / "out.dot"
    code, _, _ = run(capsys, "crystal", "--family", "A", "--n", "3", "--k", "1", "--dot", str(dot))
    assert code == 0
    assert dot.read_text().count("label=") == 6        # 3 nodes and 3 arrows


def test_crystal_json(capsys):
    code, out, _ = run(capsys, "crystal", "--family", "C", "--n", "2", "--k", "2", "--json")
    assert code == 0
    assert len(json.loads(out)["crystal"]["nodes"]) == 5


def test_crystal_usage_error(capsys):
    code, _, err = run(capsys, "crystal", "--family", "A", "--n", "3", "--k", "3")
    assert code == 2 and "out of range" in err


def test_crystal_tensor(capsys):
    code, out, _ = run(capsys, "crystal", "--family", "A", "--n", "3", "--tensor", "1,2", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["simple"] and len(rep["crystal"]["nodes"]) == 9


def test_rmatrix(capsys):
    code, out, _ = run(capsys, "rmatrix", "--family", "C", "--n", "2", "--i", "1", "--j", "1")
    rep = json.loads(out)
    assert code == 0
    assert rep["rmatrix"]["denominator"] == "(z - s^2)*(z - s^6)"
    assert rep["manifest"]["conventions"]["tensor_rule"].startswith("Kashiwara")


def test_rmatrix_closed_form(capsys):
    code, out, _ = run(capsys, "rmatrix", "--family", "A", "--n", "4", "--i", "2", "--j", "2",
                       "--check-closed-form", "--no-matrix")
    assert code == 0 and json.loads(out)["closed_form"]["verdict"] == "match"


def test_rmatrix_budget(capsys):
    code, _, err = run(capsys, "rmatrix", "--family", "A", "--n", "9", "--i", "4", "--j", "4")
    assert code == 3 and "cap" in err


def test_verify_conj2(capsys):
    code, out, _ = run(capsys, "verify", "conj2", "--family", "C", "--n", "2", "--i", "2")
    assert code == 0 and json.loads(out)["report"]["pass"]


def test_verify_poles(capsys):
    code, out, _ = run(capsys, "verify", "poles", "--family", "A", "--n", "4")
    rows = json.loads(out)["report"]["rows"]
    assert code == 0 and all(r["match"] for r in rows)


def test_verify_conj1_ordering_failure(capsys):
    code, _, err = run(capsys, "verify", "conj1", "--family", "A", "--n", "3", "--factors", "1@0,1@4")
    assert code == 1 and "ordering" in err


def test_verify_conj1_part2(capsys):
    code, out, _ = run(capsys, "verify", "conj1", "--family", "A", "--n", "3",
                       "--factors", "1@0,1@4", "--part", "2")
    assert code == 0 and json.loads(out)["report"]["cocyclic"]


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nfamily = C\nn = 2\ni = 1\nj = 2\n")
    assert read_config(str(cfg)) == {"family": "C", "n": "2", "i": "1", "j": "2"}
    code, out, _ = run(capsys, "rmatrix", "--config", str(cfg), "--j", "1", "--no-matrix")
    rep = json.loads(out)
    assert code == 0 and rep["manifest"]["j"] == 1
    assert rep["rmatrix"]["denominator"] == "(z - s^2)*(z - s^6)"


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = red\n")
    code, _, _ = run(capsys, "rmatrix", "--config", str(cfg))
    assert code == 2


def test_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 2


def test_selftest_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "selftest", "--budget", "small", "--out", str(a)]) == 0
    assert main(["verify", "selftest", "--budget", "small", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_manifest_caps():
    m = Manifest(family="C", n=4)
    with pytest.raises(BudgetError, match="cap"):
        m.check_caps()
    Manifest(family="C", n=4, unsafe_budget=True).check_caps()
