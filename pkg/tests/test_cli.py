import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from infeq.cli import run
from infeq.correspondence import NamedExample, example_library, verify_example
from infeq.serialize import (
    FormatError,
    dumps,
    frame_from_json,
    liemap_from_json,
    liemap_to_json,
    rep_from_json,
    rep_to_json,
)

DATA = Path(__file__).parent / "data"

GOLDENS = [
    (["liemap", "cocycle", "--in", str(DATA / "sl2_liemap.json")], 0, "golden_pass.out"),
    (["liemap", "cocycle", "--in", str(DATA / "z_second_derivative.json")], 1, "golden_fail.out"),
    (["liemap", "cocycle", "--in", str(DATA / "malformed_liemap.json")], 2, "golden_malformed.out"),
]


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def invoke_process(argv):
    proc = subprocess.run([sys.executable, "-m", "infeq", *argv], capture_output=True)
    return proc.returncode, proc.stdout


@pytest.mark.parametrize("argv,code,golden", GOLDENS, ids=["pass", "fail", "malformed"])
def test_golden_invocations(argv, code, golden):
    expected = (DATA / golden).read_bytes()
    got_code, got_out = invoke_process(argv)
    assert got_code == code
    assert got_out == expected
    again_code, again_out = invoke_process(argv)
    assert (again_code, again_out) == (got_code, got_out)


def test_failing_check_names_witness():
    code, out, _ = invoke(["liemap", "cocycle", "--in", str(DATA / "z_second_derivative.json")])
    report = json.loads(out)
    assert code == 1
    assert report["witnesses"][0]["pair"] == ["d0", "z0^2*d0"]


def test_malformed_input_names_field():
    code, out, err = invoke(["liemap", "cocycle", "--in", str(DATA / "malformed_liemap.json")])
    assert code == 2
    assert json.loads(out)["field"] == "coeffs[0].matrix[0][0].terms[0].re"
    assert "1.5" in err


@pytest.mark.parametrize("argv", [
    ["algebra", "info", "--dim", "2", "--trunc", "3"],
    ["algebra", "brackets", "--dim", "1", "--trunc", "3"],
    ["algebra", "derived", "--dim", "1", "--trunc", "7"],
    ["examples", "jets", "--n", "3", "--verify"],
    ["obstruction", "p1", "--degree", "-2", "--rho", "1", "--split"],
])
def test_outputs_are_byte_identical(argv):
    runs = {invoke(argv) for _ in range(3)}
    assert len(runs) == 1


def test_algebra_commands():
    code, out, _ = invoke(["algebra", "info", "--dim", "1", "--trunc", "2"])
    assert code == 0
    assert out == '{"N":2,"d":1,"dim":3,"dim_formula":3,"weights":[0,1,2]}\n'
    code, out, _ = invoke(["algebra", "derived", "--dim", "1", "--trunc", "7"])
    series = json.loads(out)["series"]
    assert [s["weights"] for s in series] == [list(range(8)), list(range(1, 8)), list(range(3, 8)), [7], []]
    code, out, _ = invoke(["algebra", "abelianization", "--dim", "2", "--trunc", "2"])
    assert json.loads(out)["quotient_dim"] == 1
    code, out, _ = invoke(["algebra", "basis", "--dim", "2", "--trunc", "0"])
    assert json.loads(out)["basis"][0] == {"dir": 1, "idx": [0, 1]}


def test_rep_commands():
    path = str(DATA / "sl2_rep.json")
    assert invoke(["rep", "validate", "--in", path])[0] == 0
    assert invoke(["rep", "lemma21", "--in", path])[0] == 0
    code, out, _ = invoke(["rep", "to-liemap", "--in", path])
    assert code == 0
    back = liemap_from_json(json.loads(out)["liemap"])
    assert back == example_library("sl2_order3").liemap


def test_liemap_commands(tmp_path):
    path = str(DATA / "sl2_liemap.json")
    code, out, _ = invoke(["liemap", "order", "--in", path])
    report = json.loads(out)
    assert code == 0 and report["order"] == 3 and report["tight"]
    assert invoke(["liemap", "flatness", "--in", path])[0] == 0
    code, out, _ = invoke(["liemap", "extract-rep", "--in", path, "--trunc", "3"])
    assert code == 0
    assert rep_from_json(json.loads(out)["rep"]) == example_library("sl2_order3").rep
    code, out, _ = invoke(["liemap", "gauge", "--in", path, "--frame", str(DATA / "unipotent_frame.json")])
    assert code == 0
    moved = tmp_path / "moved.json"
    moved.write_text(out)
    assert invoke(["liemap", "cocycle", "--in", str(moved)])[0] == 0
    assert invoke(["liemap", "extract-rep", "--in", str(DATA / "z_second_derivative.json")])[0] == 1


def test_obstruction_commands():
    code, out, _ = invoke(["obstruction", "p1", "--degree", "1", "--rho", "0"])
    assert code == 0 and json.loads(out)["obstruction"] == "1/1"
    code, out, _ = invoke(["obstruction", "p1", "--degree", "1", "--rho", "0", "--split"])
    assert code == 1 and json.loads(out)["split"] is None
    code, out, _ = invoke(["obstruction", "p1", "--degree", "2", "--rho", "-1", "--split"])
    assert code == 0 and json.loads(out)["obstruction"] == "0/1"
    code, out, _ = invoke(["obstruction", "p1", "--degree", "0", "--rho", "1/2"])
    assert json.loads(out)["obstruction"] == "1/1"


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["algebra", "info", "--dim", "1"],
    ["algebra", "info", "--dim", "0", "--trunc", "1"],
    ["examples", "jets", "--n", "9"],
    ["obstruction", "p1", "--degree", "1", "--rho", "0.5"],
    ["liemap", "gauge", "--in", str(DATA / "sl2_liemap.json")],
    ["liemap", "cocycle", "--in", str(DATA / "does_not_exist.json")],
])
def test_usage_errors_exit_2(argv):
    code, out, _ = invoke(argv)
    assert code == 2
    assert "error" in json.loads(out)


def test_resource_limit_exits_2(monkeypatch):
    monkeypatch.setenv("INFEQ_MAX_DIM", "10")
    code, out, _ = invoke(["algebra", "info", "--dim", "3", "--trunc", "4"])
    assert code == 2


LIBRARY_CASES = [
    ("densities", ["--lambda", "3/4"]),
    ("densities", ["--lambda", "-2", "--dim", "2"]),
    ("omega1", ["--dim", "2"]),
    ("jets", ["--n", "2"]),
    ("sl2_order3", []),
    ("flat", ["--rank", "3", "--dim", "2"]),
]


@pytest.mark.parametrize("name,extra", LIBRARY_CASES, ids=[c[0] + "".join(c[1]) for c in LIBRARY_CASES])
def test_examples_serialize_parse_reverify(name, extra):
    code, out, _ = invoke(["examples", name, *extra, "--verify"])
    assert code == 0
    doc = json.loads(out)
    assert doc["checks"]["all"]
    rep = rep_from_json(doc["rep"])
    L = liemap_from_json(doc["liemap"])
    assert dumps(rep_to_json(rep)) == dumps(doc["rep"])
    assert dumps(liemap_to_json(L)) == dumps(doc["liemap"])
    assert verify_example(NamedExample(name, doc["params"], rep, L))["all"]


@pytest.mark.parametrize("doc,field", [
    ({"d": 1, "r": 1}, "coeffs"),
    ({"d": 1, "r": 1, "coeffs": [{"i": 2, "idx": [0], "matrix": []}]}, "coeffs[0].i"),
    ({"d": 1, "r": 1, "coeffs": [{"i": 1, "idx": [0, 1], "matrix": []}]}, "coeffs[0].idx"),
    ({"d": 1, "r": 1, "coeffs": [{"i": 1, "idx": [0], "matrix": [[1]]}]}, "coeffs[0].matrix[0][0]"),
    ({"d": "1", "r": 1, "coeffs": []}, "d"),
])
def test_liemap_parse_errors(doc, field):
    with pytest.raises(FormatError) as info:
        liemap_from_json(doc)
    assert info.value.field == field


def test_rep_parse_errors():
    with pytest.raises(FormatError) as info:
        rep_from_json({"d": 1, "N": 1, "r": 1, "images": [{"basis": 5, "matrix": [["1"]]}]})
    assert info.value.field == "images[0].basis"
    with pytest.raises(FormatError) as info:
        rep_from_json({"d": 1, "N": 1, "r": 1, "images": [{"basis": 0, "matrix": [["1", "2"]]}]})
    assert info.value.field == "images[0].matrix"
    with pytest.raises(FormatError):
        frame_from_json({"d": 1, "r": 2, "matrix": [[{"dim": 1, "terms": []}]]})
