import json
import subprocess
import sys

import pytest

from finitealg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hf_examples(capsys):
    assert run(capsys, "hf", "--vars", "4", "x1*x2, x3*x4, x1*x3+x2*x4")[:2] == (0, "(1,4,3)\n")
    assert run(capsys, "hf", "--vars", "1", "x1^(3)")[:2] == (0, "(1,1,1,1)\n")


def test_tangent_from_fixture(capsys):
    assert run(capsys, "tangent", "--tuple", "fixtures/prop_smooth1nr1.json")[:2] == (0, "130\n")
    code, out, _ = run(capsys, "tangent", "--tuple", "prop_smooth1nr1", "--hilb", "--format", "json")
    assert json.loads(out)["hilb_tangent_dim"] == 40


def test_tangent_from_plain_tuple_file(capsys, tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"matrices": [[["0", "0"], ["1", "0"]]]}))
    assert run(capsys, "tangent", "--tuple", str(p))[:2] == (0, "4\n")


def test_file_overrides_inline(capsys, tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("x1^(2)")
    assert run(capsys, "hf", "--file", str(p), "x1^(5)")[1] == "(1,1,1)\n"


def test_json_output_round_trips(capsys):
    from finitealg.ideals import FiniteIdeal, equals
    code, out, _ = run(capsys, "intersect", "--vars", "2", "a1, a2", "--point", "1,2", "--format", "json")
    data = json.loads(out)
    assert data["colength"] == 2
    I = FiniteIdeal.from_json(data)
    J = FiniteIdeal.parse("a1, a2", 2)
    assert equals(I, FiniteIdeal.from_json(json.loads(json.dumps(I.to_json()))))
    assert not equals(I, J)


def test_other_subcommands(capsys):
    assert run(capsys, "socle", "--vars", "4", "x1*x2, x3*x4, x1*x3+x2*x4")[1] == "2:3\n"
    assert run(capsys, "socle", "--tuple", "prop_smooth1nr1")[1] == "2\n"
    code, out, _ = run(capsys, "apolar", "--degree", "2", "x1^3+x2^3+x3^3", "--format", "json")
    assert json.loads(out)["dim"] == 3
    code, out, _ = run(capsys, "algebra", "x1^(2)", "--format", "json")
    assert json.loads(out)["basis"] == ["1", "a1", "a1^2"]
    code, out, _ = run(capsys, "stable", "--ideal", "--vars", "2", "a1^2, a2^2", "--vector", "0,0,0,1")
    assert out == "not stable\n"
    code, out, _ = run(capsys, "ray", "x1^(4)+x2^(2)", "--lambda", "0,1,2")
    assert code == 0 and "nu = 4" in out and "flat: PASS" in out
    code, out, _ = run(capsys, "init-ideal", "--vars", "2", "--weight=-1,-1", "a1^2-a2^3, a1*a2", "--format", "json")
    data = json.loads(out)
    assert data["colength"] == 5
    assert sorted(data["generators"]) == ["a1*a2", "a1^2", "a2^4"]


def test_exit_codes(capsys):
    assert run(capsys, "hf", "x1^^2")[0] == 1
    assert run(capsys, "tangent", "--ideal", "--vars", "2", "a1")[0] == 1
    code, _, err = run(capsys, "hf", "x1^^2", "--format", "json")
    assert json.loads(err)["error"] == "ParseError"
    for argv in (["hf"], ["nonsense"], ["init-ideal", "a1^2"], ["intersect", "a1"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_identical_invocations_are_byte_identical():
    cmd = [sys.executable, "-m", "finitealg.cli", "stable", "--tuple", "prop_1432_case2", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["seed"] == 0


def test_verify_paper_writes_reports(tmp_path):
    cmd = [sys.executable, "-m", "finitealg.cli", "verify-paper", "--out", str(tmp_path)]
    res = subprocess.run(cmd, capture_output=True, text=True)
    # the verbatim component-point rows are reported as discrepancies, so the run is not all-PASS
    assert res.returncode == 1
    assert "DISCREPANCY" in res.stdout
    for name in ("report.json", "report.tsv", "table1.txt"):
        assert (tmp_path / name).stat().st_size > 0
    pngs = sorted(p.name for p in (tmp_path / "figures").glob("*.png"))
    assert "table1_status.png" in pngs and "tangent_dimensions.png" in pngs
    sub = subprocess.run(cmd[:-2] + ["--fixture", "prop_144_tangent", "--no-figures"], capture_output=True)
    assert sub.returncode == 0
