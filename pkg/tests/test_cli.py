import csv
import io
import json

import pytest

from qgs.catalog import example_ac_tree, fig1_tree, sparse_delta_tree
from qgs.cli import main, reproduce_example
from qgs.reduction import HalflineProblem, decompose


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, spec in (("fig1", fig1_tree()), ("example", example_ac_tree(10, 4)),
                       ("delta", sparse_delta_tree(12))):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(spec.to_json()), encoding="utf-8")
        out[name] = str(path)
    prob = tmp_path / "problem.json"
    prob.write_text(json.dumps(decompose(fig1_tree())[0].to_json()), encoding="utf-8")
    out["problem"] = str(prob)
    bad = tmp_path / "bad.json"
    spec = fig1_tree().to_json()
    spec["generations"].reverse()
    bad.write_text(json.dumps(spec), encoding="utf-8")
    out["bad"] = str(bad)
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    out["broken"] = str(broken)
    atoms = tmp_path / "atoms.json"
    atoms.write_text(json.dumps({"atoms": [{"t": 1.0, "weights": [0.1, 0.2]}]}),
                     encoding="utf-8")
    out["atoms"] = str(atoms)
    return out


class TestConvert:
    def test_b_form_text(self, capsys):
        assert main(["convert", "--alpha", "0", "--beta", "2", "--gamma", "0", "--to", "b"]) == 0
        assert capsys.readouterr().out == "a=0.5 d=0.5 c=-0.5\n"

    def test_from_b(self, capsys):
        assert main(["convert", "--from", "b", "--a", "0.5", "--d", "0.5", "--c", "-0.5",
                     "--to", "a", "--json"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["beta"] == 2.0 and out["alpha"] == 0.0

    def test_class(self, capsys):
        assert main(["convert", "--alpha", "3", "--to", "class"]) == 0
        assert capsys.readouterr().out.strip() == "Delta"

    def test_unitary_json(self, capsys):
        assert main(["convert", "--alpha", "1", "--beta", "2", "--gamma", "0.3+0.4j",
                     "--to", "u", "--json"]) == 0
        assert set(json.loads(capsys.readouterr().out)) == {"xi", "u1", "u2"}

    def test_degenerate_is_numeric_error(self, capsys):
        assert main(["convert", "--alpha", "1", "--to", "b"]) == 1
        assert "DegenerateParametrization" in capsys.readouterr().err

    def test_bad_complex(self, capsys):
        assert main(["convert", "--gamma", "abc", "--to", "a"]) == 2

    def test_missing_required(self, capsys):
        assert main(["convert"]) == 2


class TestValidate:
    def test_valid(self, files, capsys):
        assert main(["validate", "--tree", files["fig1"]]) == 0

    def test_invalid(self, files, capsys):
        assert main(["validate", "--tree", files["bad"]]) == 2
        assert "t not strictly increasing" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert main(["validate", "--tree", "/nonexistent/tree.json"]) == 2

    def test_broken_json(self, files, capsys):
        assert main(["validate", "--tree", files["broken"]]) == 2


class TestReduce:
    def test_fig1(self, files, capsys):
        assert main(["reduce", "--tree", files["fig1"], "--max-generation", "2"]) == 0
        probs = json.loads(capsys.readouterr().out)
        assert [p["multiplicity"] for p in probs] == [1, 1, 1, 3]
        back = [HalflineProblem.from_json(p) for p in probs]
        assert [p.label for p in back] == ["L0", "L1,1", "L1,2", "L2,1"]

    def test_output_file(self, files, tmp_path):
        out = tmp_path / "reduced.json"
        assert main(["reduce", "--tree", files["example"], "--output", str(out)]) == 0
        assert json.loads(out.read_text())[0]["label"] == "L0"


class TestNumericCommands:
    def test_mfun(self, files, capsys):
        assert main(["mfun", "--problem", files["problem"], "--energies", "0.5,1,2"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["E", "eta", "re_m", "im_m"] and len(rows) == 4
        assert all(float(r[3]) > 0 for r in rows[1:])

    def test_mfun_bad_eta(self, files):
        assert main(["mfun", "--problem", files["problem"], "--energies", "1",
                     "--eta", "-1"]) == 2

    def test_eig_direct(self, files, capsys):
        assert main(["eig", "--tree", files["fig1"], "--cutoff", "3", "--window", "0,20",
                     "--grid", "1000", "--direct"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["counts_equal"] and out["max_mismatch"] < 1e-8

    def test_eig_bad_window(self, files):
        assert main(["eig", "--tree", files["fig1"], "--cutoff", "3", "--window", "5,1"]) == 2

    def test_scan(self, files, capsys):
        assert main(["scan", "--tree", files["delta"], "--grid", "5"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0][0] == "E" and len(rows) == 6

    def test_scan_needs_one_source(self, files):
        assert main(["scan"]) == 2

    def test_distance(self, files, capsys):
        assert main(["distance", "--h1", files["atoms"], "--h2", files["atoms"]]) == 0
        assert float(capsys.readouterr().out) == 0.0

    def test_check_theorem(self, files, capsys):
        assert main(["check-theorem", "--tree", files["delta"]]) == 0
        assert json.loads(capsys.readouterr().out)["verdict"] == "EmptyAcPredicted"
        assert main(["check-theorem", "--tree", files["example"]]) == 0
        assert json.loads(capsys.readouterr().out)["verdict"] == "HypothesesFail"

    def test_check_theorem_insufficient(self, files, capsys):
        assert main(["check-theorem", "--tree", files["fig1"], "--N", "5"]) == 1
        assert "InsufficientGenerations" in capsys.readouterr().err


class TestReproduceExample:
    def test_report(self):
        rep = reproduce_example()
        assert rep["all_passed"]
        assert rep["b_free_reduction"]["verdict"] == "AC candidate on [0,inf)"
        assert rep["c_tree_vs_halfline"]["max_mismatch"] < 1e-8

    def test_r_zero(self):
        rep = reproduce_example(r=0.0)
        assert rep["a_decomposition"]["passed"]
