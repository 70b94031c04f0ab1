from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ratsecat.cli import main, render, run

CP2 = {"generators": [{"name": "x", "degree": 2}], "relations": ["x^3"]}
SQUARE_ZERO = {"generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 4}],
               "relations": ["x^2", "x*y", "y^2"]}
NON_CI = SQUARE_ZERO
PATH_LOOP = {"kind": "relative-model",
             "base": {"generators": [{"name": "x", "degree": 2}]},
             "fibre": {"generators": [{"name": "v", "degree": 1}]},
             "D": {"v": "x"}, "cutoff": 10}
CPN_OK = {"m": 1, "n": 2, "coeffs": [0, -4]}


@pytest.fixture
def doc(tmp_path):
    def write(obj, name="in.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return write


def invoke(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCommands:
    def test_halperin_true(self, doc):
        code, rep = run(["halperin", "--input", doc(CP2)])
        assert code == 0 and rep["halperin"] is True

    def test_halperin_false_with_witness(self, doc):
        code, rep = run(["halperin", "--input", doc(SQUARE_ZERO)])
        assert code == 3
        assert rep["witness"] == {"degree": -2, "values": {"y": "x"}}

    def test_cohomology_algebra(self, doc):
        code, rep = run(["cohomology", "--input", doc(CP2), "--max-degree", "6"])
        assert code == 0 and rep["betti"] == [1, 0, 1, 0, 1, 0, 0]

    def test_cohomology_sullivan(self, doc):
        S = {"generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 5}],
             "differential": {"y": "x^3"}}
        code, rep = run(["cohomology", "--input", doc(S), "--max-degree", "8"])
        dims = [rep["dimensions"][str(k)] for k in range(9)]
        assert code == 0 and dims == [1, 0, 1, 0, 1, 0, 0, 0, 0]
        assert rep["representatives"]["4"] == ["x^2"]

    def test_cohomology_needs_cutoff_room(self, doc):
        S = {"generators": [{"name": "x", "degree": 2}], "cutoff": 6}
        code, rep = run(["cohomology", "--input", doc(S), "--max-degree", "6"])
        assert code == 1 and rep is None

    def test_minimal_model(self, doc):
        code, rep = run(["minimal-model", "--input", doc(CP2), "--cutoff", "8"])
        assert code == 0 and rep["differential"] == {"g2_1": "0", "g5_1": "g2_1^3"}
        assert rep["quasi_isomorphism_verified"] and rep["minimal"]

    def test_aut_homotopy(self, doc):
        code, rep = run(["aut-homotopy", "--input", doc(CP2)])
        assert code == 0 and rep["baut1_homotopy_degrees"] == [4, 6]

    def test_gottlieb(self, doc):
        code, rep = run(["gottlieb", "--input", doc(CP2)])
        assert code == 0 and rep["top_gottlieb_degree"] == 5

    def test_join(self, doc):
        code, rep = run(["join", "--input", doc(CP2)])
        assert code == 0 and rep["spheres"] == [5, 7, 7, 9] and rep["count"] == 4

    def test_section_obstruction(self, doc):
        code, rep = run(["section", "--input", doc(PATH_LOOP)])
        assert code == 3 and rep["certificate"]["reason"] == "degree_obstruction"
        assert rep["rechecked"] is True

    def test_section_witness(self, doc):
        M = {"base": {"generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 5}],
                      "differential": {"y": "x^3"}},
             "fibre": {"generators": [{"name": "u", "degree": 2}, {"name": "v", "degree": 3}],
                       "differential": {"v": "u^2"}},
             "D": {"v": "u^2 - 4*x^2"}}
        code, rep = run(["section", "--input", doc(M)])
        assert code == 0 and rep["witness"]["u"] in ("2*x", "-2*x")

    def test_cpn_secat_flags(self):
        code, rep = run(["cpn-secat", "--m", "1", "--n", "2", "--coeffs", "0,1"])
        assert code == 0 and rep["value"] == 1

    def test_cpn_secat_input(self, doc):
        code, rep = run(["cpn-secat", "--input", doc(CPN_OK)])
        assert code == 0 and rep["value"] == 0 and rep["evidence"]["q"] == "2"

    def test_universal(self, doc):
        code, rep = run(["universal", "--input", doc(CP2)])
        assert code == 0 and rep["value"] == 1
        assert [s["value"] for s in rep["evidence"]["stages"]] == ["at_least_1", 1]

    def test_universal_undecided(self, doc):
        code, rep = run(["universal", "--input", doc(NON_CI)])
        assert code == 2 and rep["value"] == "undecided"

    def test_validate_invalid_model(self, doc):
        S = {"generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 5}],
             "differential": {"y": "x^2"}}
        code, rep = run(["validate", "--input", doc(S)])
        assert code == 3 and rep["valid"] is False and rep["diagnostic"]["generator"] == "y"

    def test_validate_relative(self, doc):
        code, rep = run(["validate", "--input", doc(PATH_LOOP)])
        assert code == 0 and rep["valid"]


class TestInvalidInput:
    @pytest.mark.parametrize("bad", [
        {"generators": [{"name": "x", "degree": 0}], "relations": []},
        {"generators": [{"name": "x", "degree": 2}], "relations": [], "extra": 1},
        {"generators": [{"name": "1x", "degree": 2}], "relations": []},
        {"kind": "nonsense"},
        [1, 2],
    ])
    def test_schema_rejections(self, doc, bad, capsys):
        code, out, err = invoke(capsys, ["halperin", "--input", doc(bad)])
        assert code == 1 and out == "" and err.startswith("error:")

    def test_parse_error_position(self, doc, capsys):
        bad = {"generators": [{"name": "x", "degree": 2}], "relations": ["x^"]}
        code, _, err = invoke(capsys, ["halperin", "--input", doc(bad)])
        assert code == 1 and "position 2" in err

    def test_bad_json(self, doc, capsys):
        code, _, err = invoke(capsys, ["join", "--input", doc("{not json")])
        assert code == 1 and "invalid JSON" in err

    def test_missing_file(self, capsys):
        code, _, _ = invoke(capsys, ["join", "--input", "/nonexistent/file.json"])
        assert code == 1

    def test_wrong_kind(self, doc):
        assert run(["section", "--input", doc(CP2)])[0] == 1

    def test_family_bounds(self):
        assert run(["cpn-secat", "--m", "2", "--n", "2", "--coeffs", "0,0,1"])[0] == 1
        assert run(["cpn-secat", "--m", "1", "--n", "2", "--coeffs", "0,1/0"])[0] == 1

    def test_missing_input(self):
        assert run(["join"])[0] == 1

    def test_truncated_model_refused_for_homotopy(self, doc):
        S = {"generators": [{"name": "x", "degree": 3}], "cutoff": 8}
        assert run(["aut-homotopy", "--input", doc(S)])[0] == 1


class TestReports:
    def test_envelope(self, doc):
        _, rep = run(["join", "--input", doc(CP2), "--seed", "5"])
        assert rep["command"] == "join" and rep["seed"] == 5
        assert rep["input_digest"].startswith("sha256:") and len(rep["input_digest"]) == 71
        assert "engine_version" in rep

    def test_byte_identical(self, doc, capsys):
        path = doc(CP2)
        first = invoke(capsys, ["universal", "--input", path])
        second = invoke(capsys, ["universal", "--input", path])
        assert first == second

    def test_text_output(self, doc, capsys):
        code, out, _ = invoke(capsys, ["gottlieb", "--input", doc(CP2), "--output", "text"])
        assert code == 0 and "top_gottlieb_degree: 5" in out.splitlines()

    def test_render_sorted(self):
        text = render({"b": 1, "a": [1]}, "text")
        assert text == "a: [1]\nb: 1"

    def test_console_entry_point(self, doc):
        proc = subprocess.run([sys.executable, "-m", "ratsecat.cli", "join", "--input", doc(CP2)],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and json.loads(proc.stdout)["spheres"] == [5, 7, 7, 9]
