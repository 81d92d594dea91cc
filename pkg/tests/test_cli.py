import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from irrep.cli import main
from irrep.parser import parse_presentation

from conftest import DATA

SCHEMA = json.loads(resources.files("irrep").joinpath("schema/report.schema.json").read_text())
CORPUS = DATA / "corpus"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["exit_code"] == code
    return code, report


def test_decide_squared_commutators(capsys):
    code, rep = run_json(capsys, "decide", DATA / "sqcomm2.pres")
    assert code == 0
    assert rep["decision"]["status"] == "Exists"
    assert rep["decision"]["witness_words"] == "tr[X * s2(Y,Z)]"


def test_decide_commuting_pair(capsys):
    code, rep = run_json(capsys, "decide", CORPUS / "commuting_pair.pres")
    assert code == 1 and rep["decision"]["status"] == "NotExists"


def test_decide_unknown(capsys):
    code, rep = run_json(capsys, "decide", DATA / "sqcomm2.pres", "--max-candidates", 0)
    assert code == 2 and rep["decision"]["status"] == "Unknown"


def test_syntax_error(tmp_path, capsys):
    bad = tmp_path / "bad.pres"
    bad.write_text("field: QQ\ndimension: 2\ngenerators: X Y\nrelation: X*Y - \n")
    code, out, err = run(capsys, "decide", bad)
    assert code == 3
    assert "line 4" in err and "column" in err


@pytest.mark.parametrize("argv", [["decide", "missing.pres"],
                                  ["decide", "x", "--budget-seconds", "0"],
                                  ["decide", "x", "--seed", "-1"],
                                  ["frobnicate"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 3


def test_verify_squared_commutators(capsys):
    code, rep = run_json(capsys, "verify", DATA / "sqcomm2.pres", DATA / "sqcomm2.point",
                         "--witness", "tr[X*(Y*Z - Z*Y)]")
    v = rep["verification"]
    assert code == 0 and v["span_rank"] == 4 and v["witnesses"][0]["value"] == "16"


def test_verify_squared_commutators_dim3(capsys):
    code, rep = run_json(capsys, "verify", DATA / "sqcomm3.pres", DATA / "sqcomm3.point",
                         "--witness", "tr[X * s4(Y, Z, X*Y, X*Z)]")
    v = rep["verification"]
    assert v["span_rank"] == 9 and v["witnesses"][0]["value"] == "8192"
    # the reference point violates relation 1, see test_pipeline
    assert code == 6 and v["failure"]["relation"] == 1


def test_verify_identity_point(capsys):
    code, rep = run_json(capsys, "verify", DATA / "sqcomm2.pres", DATA / "sqcomm2_identity.point")
    assert code == 5 and rep["verification"]["span_rank"] == 1


def test_verify_relation_fails(tmp_path, capsys):
    pt = tmp_path / "p.point"
    pt.write_text("field: QQ\nmatrix X: [[1, 0], [0, 1]]\nmatrix Y: [[1, 0], [0, -1]]\n")
    code, _ = run_json(capsys, "verify", CORPUS / "split_quaternions.pres", pt)
    assert code == 6


def test_verify_dimension_mismatch(tmp_path, capsys):
    pt = tmp_path / "p.point"
    pt.write_text("field: QQ\nmatrix X: [[1]]\nmatrix Y: [[1]]\n")
    assert run(capsys, "verify", CORPUS / "split_quaternions.pres", pt)[0] == 3


@pytest.mark.parametrize("name", ["squared_commutators", "hamilton_quaternions", "split_quaternions"])
def test_construct_then_verify(tmp_path, capsys, name):
    out = tmp_path / "out.point"
    code, rep = run_json(capsys, "construct", CORPUS / f"{name}.pres", "-o", out)
    assert code == 0 and out.read_text() == rep["point_file"]
    code, rep = run_json(capsys, "verify", CORPUS / f"{name}.pres", out)
    assert code == 0 and rep["verification"]["irreducible"]


def test_construct_n1(capsys):
    code, rep = run_json(capsys, "construct", CORPUS / "scalar_involution.pres")
    assert code == 0 and rep["point"]["matrices"]["X"] in ([["1"]], [["-1"]])


def test_construct_not_exists(capsys):
    code, rep = run_json(capsys, "construct", CORPUS / "commuting_pair.pres")
    assert code == 1 and "point" not in rep


def test_print_round_trip(tmp_path, capsys):
    for src in [DATA / "central_roots3.pres", *sorted(CORPUS.glob("*.pres"))]:
        code, out, _ = run(capsys, "print", src)
        assert code == 0
        assert parse_presentation(out) == parse_presentation(src.read_text())
        again = tmp_path / "again.pres"
        again.write_text(out)
        assert run(capsys, "print", again)[1] == out


def _keys(obj, acc):
    if isinstance(obj, dict):
        for k, v in obj.items():
            acc.add(k)
            _keys(v, acc)
    elif isinstance(obj, list):
        for v in obj:
            _keys(v, acc)
    return acc


@pytest.mark.parametrize("argv", [["decide", DATA / "sqcomm2.pres"],
                                  ["verify", DATA / "sqcomm2.pres", DATA / "sqcomm2.point"],
                                  ["construct", CORPUS / "split_quaternions.pres"]])
def test_human_and_json_fields_agree(capsys, argv):
    _, rep = run_json(capsys, *argv)
    _, human, _ = run(capsys, *argv, "-v")
    labels = {ln.strip().lstrip("- ").split(":")[0] for ln in human.splitlines() if ":" in ln}
    assert _keys(rep, set()) <= labels


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "irrep.cli", "decide",
                           str(CORPUS / "free_pair.pres")], capture_output=True, text=True)
    assert proc.returncode == 0 and "Exists" in proc.stdout
