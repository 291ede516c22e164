import json
import subprocess
import sys
from pathlib import Path

import pytest

from qfix.cli import main

DEMOS = Path(__file__).resolve().parent.parent / "demos"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_check_exit_codes(capsys):
    assert run(capsys, "check", DEMOS / "metric3.json")[0] == 0
    code, out = run(capsys, "check", DEMOS / "triangle-violation.json")
    assert code == 1 and "not below" in out
    assert run(capsys, "check", DEMOS / "malformed.json")[0] == 2


def test_malformed_reports_location(capsys):
    code = main(["check", str(DEMOS / "malformed.json")])
    err = capsys.readouterr().err
    assert code == 2 and "malformed.json:" in err


def test_schema_error_exit(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"version": "v1", "quantale": "nope"}))
    assert main(["check", str(p)]) == 2
    p.write_text(json.dumps({"quantale": "lawvere"}))
    assert main(["check", str(p)]) == 2


def test_solve_banach(capsys):
    code, out = run(capsys, "solve", DEMOS / "banach.json", "--start", "0", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["status"] == "fixpoint-found"
    assert abs(doc["result"]["limit"] - 2.0) <= 1e-6
    assert doc["horizon"] == 64


def test_solve_sweep_disconnected(capsys):
    for name in ("two-component.json", "line-two-components.json"):
        code, out = run(capsys, "solve", DEMOS / name, "--sweep", "--json")
        doc = json.loads(out)
        assert code == 0, name
        assert [k["case"] for k in doc["classification"]] == ["disconnected"], name


def test_precondition_exit(capsys):
    code, out = run(capsys, "solve", DEMOS / "precondition.json", "--json")
    assert code == 1
    assert json.loads(out)["result"]["status"] == "precondition-failed"


def test_json_is_deterministic():
    cmd = [sys.executable, "-m", "qfix", "check", str(DEMOS / "pm-space.json"), "--json", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.stdout and a.stdout == b.stdout


def test_timing_only_on_request(capsys):
    _, out = run(capsys, "check", DEMOS / "metric3.json", "--json")
    assert "seconds" not in out
    _, out = run(capsys, "check", DEMOS / "metric3.json", "--json", "--timing")
    assert "seconds" in out


@pytest.mark.parametrize("name", ["banach", "boyd-wong", "fuzzy", "pm-embed", "delta-counterexample", "boolean-degenerate"])
def test_demos(capsys, name):
    code, out = run(capsys, "demo", name)
    assert code == 0, out
    assert "as expected" in out


def test_demo_texts(capsys):
    _, out = run(capsys, "demo", "delta-counterexample")
    assert "0.5" in out
    _, out = run(capsys, "demo", "boolean-degenerate")
    assert "precondition-failed" in out


def test_list_demos(capsys):
    code, out = run(capsys, "list-demos")
    assert code == 0 and "banach" in out and "two-component" in out
