from __future__ import annotations

import io
import json

import pytest

from biliaison.cli import main
from biliaison.grmatrix import GradedMatrix
from biliaison.polyring import FieldSpec, MultiPoly


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------------------
# qprofile


def test_qprofile_table_32():
    code, out, _ = run(["qprofile", "--fixture", "3.2"])
    assert code == 0
    assert "  2 |     4 |    4 |     3 |   3" in out
    assert "b0 : 0" in out
    assert "r  : 4" in out


def test_qprofile_table_33():
    code, out, _ = run(["qprofile", "--fixture", "3.3"])
    assert code == 0
    assert "b0 : 1" in out
    # q(2) = 2 and q(3) = 3 in the last column
    assert "  2 |     3 |    3 |     2 |   2" in out
    assert "  3 |     6 |    6 |     5 |   3" in out


def test_qprofile_json_matches_table_values():
    code, out, _ = run(["qprofile", "--fixture", "3.3", "--format", "json"])
    assert code == 0
    obj = json.loads(out)
    assert obj["b0"] == 1
    assert obj["stable_rank"] == 6
    assert obj["q"] == {"2": 2, "3": 3}


def test_qprofile_empty_matrix(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({
        "field": {"kind": "prime", "characteristic": 32003},
        "row_degrees": [0],
        "col_degrees": [],
        "entries": [[]],
    }))
    code, out, _ = run(["qprofile", "--input", str(path)])
    assert code == 0
    assert "r  : 0" in out


def test_parse_error_exit_code(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, out, _ = run(["qprofile", "--input", str(path)])
    assert code == 2
    missing = tmp_path / "nonexistent.json"
    code, out, _ = run(["qprofile", "--input", str(missing)])
    assert code == 2
    code, out, _ = run(["qprofile"])
    assert code == 2


def test_inhomogeneous_input_is_parse_error(tmp_path):
    path = tmp_path / "inhom.json"
    path.write_text(json.dumps({
        "field": {"kind": "prime", "characteristic": 32003},
        "row_degrees": [0],
        "col_degrees": [1],
        "entries": [["X^2"]],
    }))
    code, out, _ = run(["qprofile", "--input", str(path)])
    assert code == 2


def test_hypothesis_failure_without_trust_flag(tmp_path):
    # two planes through a common line: the rank-level minors vanish on it
    path = tmp_path / "nonfree.json"
    path.write_text(json.dumps({
        "field": {"kind": "prime", "characteristic": 32003},
        "row_degrees": [0],
        "col_degrees": [1, 1],
        "entries": [["X", "Y"]],
    }))
    code, out, _ = run(["qprofile", "--input", str(path)])
    assert code == 3
    code, out, _ = run(["qprofile", "--input", str(path), "--assume-locally-free"])
    assert code == 0


def test_window_exhaustion_exit_code():
    code, out, _ = run(["qprofile", "--fixture", "3.2", "--window", "0:1"])
    assert code == 4


# ---------------------------------------------------------------------------
# minimal-family


def test_minimal_family_values():
    code, out, _ = run(["minimal-family", "--fixture", "3.2"])
    assert code == 0
    assert "h0     : 2" in out
    assert "d0     : 6" in out
    assert "g0     : 3" in out


def test_minimal_family_deterministic_output():
    _, out1, _ = run(["minimal-family", "--fixture", "3.2", "--seed", "7"])
    _, out2, _ = run(["minimal-family", "--fixture", "3.2", "--seed", "7"])
    assert out1 == out2


def test_minimal_family_json_roundtrip():
    code, out, _ = run(["minimal-family", "--fixture", "3.3", "--format", "json"])
    assert code == 0
    obj = json.loads(out)
    assert obj["d0"] == 6 and obj["g0"] == 3 and obj["h0"] == 1
    assert obj["q"] == {"2": 2, "3": 3}
    assert len(obj["hilbert_polynomial"]) == 4


def test_minimal_family_dissociated_exit_code(tmp_path):
    path = tmp_path / "free.json"
    path.write_text(json.dumps({
        "field": {"kind": "prime", "characteristic": 32003},
        "row_degrees": [1, 2],
        "col_degrees": [1, 2],
        "entries": [["1", "0"], ["0", "1"]],
    }))
    code, out, _ = run(["minimal-family", "--input", str(path)])
    assert code == 5


# ---------------------------------------------------------------------------
# check-p


def test_check_p_accepts_q():
    code, out, _ = run(["check-p", "--fixture", "3.2", "--p", '{"2": 3}'])
    assert code == 0
    assert "shift h = 2" in out


def test_check_p_rejects_with_witness():
    code, out, _ = run(["check-p", "--fixture", "3.2", "--p", '{"1": 1, "2": 2}'])
    assert code == 1
    assert "q#(1)" in out


def test_check_p_wrong_mass():
    code, out, _ = run(["check-p", "--fixture", "3.2", "--p", '{"2": 2}'])
    assert code == 2


def test_check_p_malformed():
    code, out, _ = run(["check-p", "--fixture", "3.2", "--p", "not json"])
    assert code == 2


# ---------------------------------------------------------------------------
# examples


def test_examples_all_pass():
    code, out, _ = run(["examples"])
    assert code == 0
    for name in ("3.2", "3.3", "3.4"):
        assert f"[PASS] {name}" in out


def test_examples_negative_control():
    code, out, _ = run(["examples", "--perturb"])
    assert code == 1
    assert "[FAIL] 3.2" in out


def test_examples_json_export():
    code, out, _ = run(["examples", "--format", "json"])
    assert code == 0
    obj = json.loads(out[out.index("{"):])
    assert obj["3.2"]["pass"] is True
    assert obj["3.4"]["checks"]["d0"]["got"] == 120


# ---------------------------------------------------------------------------
# fixture export


def test_export_matrix_flag(tmp_path):
    path = tmp_path / "fixture32.json"
    code, _, _ = run(["qprofile", "--fixture", "3.2", "--export-matrix", str(path)])
    assert code == 0
    m = GradedMatrix.load(str(path))
    assert (m.nrows, m.ncols) == (5, 10)
