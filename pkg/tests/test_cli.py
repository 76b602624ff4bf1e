import io
import json
import subprocess
import sys

import pytest

from heightlab.cli import main

TORSION_DOC = {
    "schema_version": "1",
    "rep": {"rank": 2, "r": 1, "N": [[["0", "0"], ["2", "0"]]], "T": [[["1", "0"], ["2", "1"]]]},
    "alpha": [["0", "1"]],
    "beta": [["1", "0"]],
}


def run(argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv, out)
    return code, out.getvalue()


def write(tmp_path, obj, name="doc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_jordan_height():
    code, out = run(["jordan", "--a", "0,1", "--b", "0,1", "--t", "1,1"])
    assert code == 0 and json.loads(out)["value"] == "1/2"


def test_ceresa_symbolic():
    code, out = run(["ceresa", "--g", "3", "--h", "1", "--symbolic"])
    rep = json.loads(out)
    assert code == 0 and rep["value"] == "(4*t1*t2)/(t1+t2)" and rep["stratum"] == [1, 2]


def test_ceresa_at_origin():
    code, out = run(["ceresa", "--g", "3", "--h", "1", "--t", "0,0"])
    assert json.loads(out)["value"] == "0"


def test_torsion(tmp_path):
    code, out = run(["torsion", write(tmp_path, TORSION_DOC)])
    assert code == 0 and json.loads(out) == {"value": "1/2"}


def test_not_torsion_exit_4(tmp_path):
    doc = dict(TORSION_DOC, alpha=[["1", "0"]])
    code, _ = run(["torsion", write(tmp_path, doc)])
    assert code == 4


def test_jump_from_stdin(monkeypatch):
    _, doc = run(["jordan", "--a", "0,1", "--b", "0,1"])
    code, out = run(["jump", "-", "--t", "1,1"], stdin=doc, monkeypatch=monkeypatch)
    assert code == 0
    assert json.loads(out) == {"holds": True, "h": "1/2", "mu": "1/2", "sum_t_mu": "1"}


def test_validate_ok(tmp_path):
    _, doc = run(["jordan", "--a", "0,1,2", "--b", "1,0,0"])
    code, out = run(["validate", write(tmp_path, json.loads(doc))])
    assert code == 0 and json.loads(out)["valid"]


def test_validate_noncommuting(tmp_path):
    doc = {"schema_version": "1",
           "rep": {"rank": 2, "r": 2, "N": [[["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]]]}}
    code, out = run(["validate", write(tmp_path, doc)])
    assert code == 2
    assert json.loads(out)["problems"][0]["pair"] == [1, 2]


def test_validate_bad_cocycle(tmp_path):
    doc = dict(TORSION_DOC, alpha=[["1", "0"]])
    code, out = run(["validate", write(tmp_path, doc)])
    assert code == 2 and "alpha" in json.loads(out)["problems"][0]["message"]


def test_malformed_rational_exit_3(tmp_path):
    doc = json.loads(json.dumps(TORSION_DOC))
    doc["rep"]["T"][0][1][0] = "1/0"
    code, _ = run(["validate", write(tmp_path, doc)])
    assert code == 3


def test_unknown_field_exit_3(tmp_path):
    code, _ = run(["validate", write(tmp_path, dict(TORSION_DOC, extra=True))])
    assert code == 3


def test_missing_file_exit_3(tmp_path):
    code, _ = run(["validate", str(tmp_path / "nope.json")])
    assert code == 3


def test_ih_jordan(tmp_path):
    _, doc = run(["jordan", "--a", "0,1,2", "--b", "0,1,2"])
    code, out = run(["ih", write(tmp_path, json.loads(doc))])
    rep = json.loads(out)
    assert code == 0 and rep["dim"] == 2 and len(rep["basis"]) == 2


def test_ih_zero_logs(tmp_path):
    doc = {"schema_version": "1", "rep": {"rank": 2, "r": 2, "N": [[["0", "0"], ["0", "0"]]] * 2}}
    _, out = run(["ih", write(tmp_path, doc)])
    assert json.loads(out)["dim"] == 0


def test_ih_ceresa(tmp_path):
    _, doc = run(["ceresa", "--g", "3", "--h", "1"])
    _, out = run(["ih", write(tmp_path, json.loads(doc))])
    assert json.loads(out)["dim"] == 5


def test_not_admissible_exit_4(tmp_path):
    # a supplied l that does not solve N(t) l = α(t)
    _, doc = run(["jordan", "--a", "0,1", "--b", "0,1"])
    obj = json.loads(doc)
    obj["query"] = {"t": ["1", "1"], "l": ["0", "0"]}
    code, _ = run(["height", write(tmp_path, obj)])
    assert code == 4


def test_invalid_pair_exit_2():
    code, _ = run(["ceresa", "--g", "4", "--h", "3", "--t", "1,1"])
    assert code == 2
    code, _ = run(["ceresa", "--g", "2", "--h", "1"])
    assert code == 2


@pytest.mark.parametrize("mode", [["--symbolic"], ["--t", "2,3"], ["--stratum", "2"]])
def test_report_round_trip(tmp_path, mode):
    _, doc = run(["ceresa", "--g", "3", "--h", "1"])
    doc = json.loads(doc)
    _, first = run(["height", write(tmp_path, doc)] + mode)
    report = json.loads(first)
    doc["alpha"] = report["representatives"]["alpha"]
    doc["beta"] = report["representatives"]["beta"]
    doc.setdefault("query", {})["l"] = report["representatives"]["l"]
    _, second = run(["height", write(tmp_path, doc, "again.json")] + mode)
    assert first == second


def test_deterministic_output():
    a = run(["jordan", "--a", "1,-2,3", "--b", "0,4,1", "--symbolic"])
    b = run(["jordan", "--a", "1,-2,3", "--b", "0,4,1", "--symbolic"])
    assert a == b
    assert json.loads(a[1])["value"] == "(-12*t1*t2+2*t1*t3-15*t2*t3)/(t1+t2+t3)"


def test_query_in_document_is_used(tmp_path):
    _, doc = run(["jordan", "--a", "0,1", "--b", "0,1"])
    obj = json.loads(doc)
    obj["query"] = {"t": ["2", "2"]}
    _, out = run(["height", write(tmp_path, obj)])
    assert json.loads(out)["value"] == "1"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heightlab", "jordan", "--a", "0,1", "--b", "0,1", "--t", "1,1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "1/2"


def test_selftest_passes():
    code, out = run(["selftest"])
    assert code == 0
    assert out.count("[PASS]") == 9
