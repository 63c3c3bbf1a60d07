import csv
import io
import json
import shutil
import subprocess

import pytest

from romik import acceptance, cli


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_expand_rational_json():
    code, out, _ = call("expand", "--point", "3/5,4/5")
    assert code == 0
    assert json.loads(out) == {"prefix": [2], "tail": "ONES"}


def test_expand_both_text():
    code, out, _ = call("expand", "--point", "3/5,4/5", "--both", "--format", "text")
    assert out.split() == ["[2,1^inf]", "[3,1^inf]"]


def test_expand_stream():
    _, out, _ = call("expand", "--point", "1/2,√3/2", "-n", "4")
    assert json.loads(out) == [3, 1, 3, 1]
    _, out, _ = call("expand", "--point", "1/2,sqrt(3)/2", "-n", "4", "--format", "text")
    assert out.strip() == "3 1 3 1"


def test_expand_quadratic_point():
    _, out, _ = call("expand", "--point", "√2/2,√2/2")
    assert json.loads(out) == {"preperiod": [], "period": [2]}


def test_tree_jsonl():
    code, out, _ = call("tree", "--root", "3,4,5", "--depth", "2")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) == 13
    assert rows[0] == {"a": 3, "b": 4, "c": 5, "path": [], "root": [3, 4, 5]}
    assert {"a": 7, "b": 24, "c": 25, "path": [3, 3], "root": [3, 4, 5]} in rows


def test_tree_csv_and_dot():
    _, out, _ = call("tree", "--depth", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["c"] for r in rows] == ["5", "17", "29", "13"]
    _, out, _ = call("tree", "--root", "4,3,5", "--depth", "1", "--dot")
    assert out.startswith("digraph")
    assert '"4_3_5" -> "12_5_13" [label="M1"];' in out


def test_tree_c_max():
    _, out, _ = call("tree", "--c-max", "29", "--format", "json")
    rows = json.loads(out)
    assert len(rows) == 10
    assert {tuple(r["root"]) for r in rows} == {(3, 4, 5), (4, 3, 5)}


def test_descend():
    _, out, _ = call("descend", "7,24,25")
    obj = json.loads(out)
    assert obj["digits"] == [3, 3]
    assert obj["root"] == [3, 4, 5]
    assert obj["terminal"] == {"vector": [1, 0, 1], "digit": 2}
    assert obj["funnel"]["passed"] is True
    _, out, _ = call("descend", "7,24,25", "--format", "text")
    assert out.strip() == "(3, 4, 5) [M3] <- (5, 12, 13) [M3] <- (7, 24, 25)"


def test_period_and_construct():
    _, out, _ = call("period", "--point", "1/2,√3/2", "--d", "3", "--format", "text")
    assert out.strip() == "[(3,1)^inf]"
    _, out, _ = call("construct", "--word", "3,1")
    obj = json.loads(out)
    assert obj["point_text"] == ["1/2", "1/2√3"]
    assert obj["lambda1_text"] == "7+4√3" and obj["d"] == 3


def test_galois():
    _, out, _ = call("galois", "--word", "1,2,3")
    assert json.loads(out)["passed"] is True


def test_count():
    _, out, _ = call("count", "--k", "2", "--d", "3")
    obj = json.loads(out)
    assert obj["count"] == 2 and [3, 1] in obj["witnesses"]
    _, out, _ = call("count", "--k", "2", "--d", "7", "--format", "text")
    assert out.strip() == "N(2, Q(sqrt 7)) = 0"


def test_roots():
    _, out, _ = call("roots", "--word", "3,1", "--format", "text")
    assert "[√3, 1, 2] --M3--> [1, √3, 2]" in out
    assert "[1, √3, 2] --M1--> [√3, 1, 2]" in out
    _, out, _ = call("roots", "--word", "3,1", "--dot", "--depth", "1")
    assert out.count("->") == 2 + 4
    _, out, _ = call("roots", "--word", "3,1")
    assert json.loads(out)["unit"] == "2+√3"


def test_mat():
    _, out, _ = call("mat", "H")
    assert json.loads(out) == [[-1, -2, 2], [-2, -1, 2], [-2, -2, 3]]
    _, out, _ = call("mat", "--word", "3,1")
    assert json.loads(out) == [[-1, 4, 4], [-4, 7, 8], [-4, 8, 9]]


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (("expand", "--point", "1,1"), "not on the unit circle"),
        (("expand", "--point=-3/5,4/5"), "quarter circle"),
        (("descend", "6,8,10"), "not a primitive"),
        (("construct", "--word", "1,1"), "rational fixed point"),
        (("period", "--point", "√2/2,√2/2", "--d", "3"), "not Q(sqrt 3)"),
        (("count", "--k", "2", "--d", "4"), "squarefree"),
    ],
)
def test_domain_errors_exit_1(argv, fragment):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    assert fragment in err


def test_usage_errors_exit_2():
    assert call()[0] == 2
    assert call("construct", "--word", "a,b")[0] == 2
    assert call("expand")[0] == 2


def test_selftest_reports_failures(monkeypatch):
    fake = [
        acceptance.CriterionResult(1, "one", True, "ok", 0.0),
        acceptance.CriterionResult(2, "two", False, "bad", 0.0),
    ]
    monkeypatch.setattr(acceptance, "run_all", lambda: fake)
    code, out, _ = call("selftest")
    assert code == 1
    assert out.splitlines()[-1] == "1/2 criteria passed"
    assert out.splitlines()[1].startswith("[FAIL]")


@pytest.mark.skipif(shutil.which("romik") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["romik", "mat", "M1", "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.split() == ["-1", "2", "2", "-2", "1", "2", "-2", "2", "3"]
