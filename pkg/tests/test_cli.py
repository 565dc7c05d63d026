import json

import pytest

from quasiassoc.cli import main, print_table
from quasiassoc.errors import UnknownSuite
from quasiassoc.graded import Lambda, Table
from quasiassoc.scalars import RatFunc
from quasiassoc.suites import SUITES, run_suite


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_mul_table_json(capsys):
    code, out = run(capsys, "table", "mul", "--range", "1", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["kind"] == "mul" and len(data["entries"]) == 9
    e = next(x for x in data["entries"] if (x["p"], x["q"]) == (1, 1))
    assert RatFunc.from_json(e["ratfunc"]) == RatFunc.from_json(e["ratfunc"])


def test_cocycle_and_phi_tables(capsys):
    _, out = run(capsys, "table", "cocycle", "--range", "2")
    assert "ω(e_2,e_-2) = 6" in out.splitlines()
    assert "ω(e_1,e_-1) = 0" in out.splitlines()
    _, out = run(capsys, "table", "phi", "--range", "0")
    assert out.strip() == "φ(0) = 0"


def test_table_for_other_family():
    text = print_table("mul", Lambda(2), 0)
    assert text == "f(0,0) = 2"
    with pytest.raises(ValueError):
        print_table("bogus")


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "graded", "--eps-value", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "graded", "--window", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["table", "mul", "--range", "-1"])
    assert exc.value.code == 2


def test_verify_json_is_deterministic(capsys):
    args = ("verify", "complex", "--window", "3", "--trials", "6", "--format", "json")
    code1, a = run(capsys, *args)
    code2, b = run(capsys, *args)
    assert code1 == code2 == 0
    assert a == b
    data = json.loads(a)
    assert data["passed"] is True
    rep = data["reports"][0]
    assert rep["suite"] == "complex" and rep["failures"] == [] and "elapsed" not in rep
    assert rep["details"]["left_mult_witness"]["args"]


def test_timing_flag(capsys):
    _, out = run(capsys, "verify", "appendix1", "--format", "json", "--timing")
    assert "elapsed" in json.loads(out)["reports"][0]


def test_numeric_eps_reports_poles_as_failures(capsys):
    code, out = run(capsys, "verify", "graded", "--window", "3", "--eps-value", "1/2", "--format", "json")
    assert code == 1
    fails = json.loads(out)["reports"][0]["failures"]
    assert fails and all("PoleAtEpsilon" in f["error"] for f in fails)


def test_numeric_eps_away_from_poles(capsys):
    # 1/(p+q) never equals -ε for ε = 1/100 inside the window
    code, _ = run(capsys, "verify", "graded", "--window", "4", "--eps-value", "1/100")
    assert code == 0


def test_family_from_file(tmp_path, capsys):
    path = tmp_path / "fam.json"
    path.write_text(json.dumps(Table.from_function(lambda p, q: p + q, 5).to_json()))
    code, out = run(capsys, "verify", "graded", "--window", "3", "--family", str(path), "--format", "json")
    assert code == 1
    ops = {f["operation"] for f in json.loads(out)["reports"][0]["failures"]}
    assert "quasiassoc_residual" in ops


def test_lambda_family_passes(capsys):
    code, _ = run(capsys, "verify", "cocycle", "--window", "4", "--family", "lambda=1/3")
    assert code == 0


def test_run_suite_api():
    assert len(run_suite("all", window=3, trials=2)) == len(SUITES)
    with pytest.raises(UnknownSuite):
        run_suite("bogus")
