import json
import subprocess
import sys

import jsonschema
import pytest

from chainlab.cli import EXIT_FAIL, EXIT_INTERNAL, EXIT_PASS, EXIT_USAGE, Command, UsageError, main
from chainlab.report import load_schema

SCHEMA = load_schema()


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _json(capsys, *argv):
    code, out, _ = _run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["schema"] == "chainlab/1"
    assert all(e["anchor"] for e in doc["entries"])
    return code, doc


def test_chain_latex(capsys):
    code, out, _ = _run(capsys, "chain", "--family", "riccati", "--order", "3", "--format", "latex")
    assert code == EXIT_PASS
    assert "u_{xxx}+4uu_{xx}+6u^2u_{x}+3u_{x}^2+u^4=0" in out


def test_verify_symmetry_abel(capsys):
    code, doc = _json(capsys, "verify", "--suite", "symmetry", "--family", "abel",
                      "--max-order", "4")
    assert code == EXIT_PASS
    assert len(doc["entries"]) == 3
    assert [e["order"] for e in doc["entries"]] == [2, 3, 4]


def test_solve_eval(capsys):
    code, out, _ = _run(capsys, "solve", "--family", "riccati", "--order", "2",
                        "--constants", "0,0", "--eval", "1")
    assert code == EXIT_PASS
    assert "u(1) = 2" in out


def test_solve_abel_not_real(capsys):
    code, out, _ = _run(capsys, "solve", "--family", "abel", "--order", "2",
                        "--constants", "0,0", "--eval", "-1")
    assert code == EXIT_PASS
    assert "not real" in out and "-2 < 0" in out


def test_solve_symbolic_and_recursive(capsys):
    code, doc = _json(capsys, "solve", "--family", "abel", "--order", "3", "--recursive")
    assert code == EXIT_PASS
    assert doc["data"]["normalization"] == 15
    code, out, _ = _run(capsys, "solve", "--family", "riccati", "--order", "2", "--constants",
                        "a,2/3", "--format", "latex")
    assert code == EXIT_PASS and r"\frac" in out


def test_solve_pole_is_a_failure(capsys):
    code, out, _ = _run(capsys, "solve", "--family", "riccati", "--order", "2",
                        "--constants", "0,0", "--eval", "0")
    assert code == EXIT_FAIL and "pole" in out


def test_reduce(capsys):
    code, doc = _json(capsys, "reduce", "--family", "abel", "--order", "4")
    assert code == EXIT_PASS
    assert len(doc["data"]["ladder"]) == 3
    assert all(e["residual"] == "0" for e in doc["entries"])


def test_symmetry_with_c(capsys):
    code, doc = _json(capsys, "symmetry", "--family", "riccati", "--order", "3",
                      "--c", "exp(2*x)")
    assert code == EXIT_PASS
    assert doc["data"]["c"]


def test_numcheck_pass_and_pole(capsys):
    code, doc = _json(capsys, "numcheck", "--family", "abel", "--order", "2",
                      "--constants", "0,1", "--interval", "0.5,3")
    assert code == EXIT_PASS
    assert len(doc["data"]["samples"]) >= 200
    code, doc = _json(capsys, "numcheck", "--family", "riccati", "--order", "2",
                      "--constants", "0,0", "--interval", "-1,1")
    assert code == EXIT_FAIL
    assert "pole" in doc["entries"][0]["residual"]


def test_numcheck_random(capsys):
    code, doc = _json(capsys, "numcheck", "--family", "riccati", "--order", "3",
                      "--random", "3", "--seed", "7")
    assert code == EXIT_PASS and len(doc["entries"]) == 3


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = _run(capsys, "chain", "--family", "abel", "--order", "2", "--format", "json",
                        "--out", str(target))
    assert code == EXIT_PASS and out == ""
    jsonschema.validate(json.loads(target.read_text()), SCHEMA)


def test_text_report_lines(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "catalog")
    assert code == EXIT_PASS
    assert "known misprint" in out


def test_report_entries_are_sorted(capsys):
    code, doc = _json(capsys, "verify", "--suite", "reduction", "--max-order", "4")
    keys = [(e["family"], e["order"], e["name"]) for e in doc["entries"]]
    assert keys == sorted(keys)


@pytest.mark.parametrize("argv, code", [
    (["chain", "--family", "riccati", "--order", "3"], EXIT_PASS),
    (["verify", "--suite", "determining"], EXIT_PASS),
    (["verify", "--suite", "invariants", "--c", "x^2+1"], EXIT_PASS),
    (["verify", "--suite", "published"], EXIT_PASS),
    (["verify", "--suite", "generality", "--max-order", "3"], EXIT_PASS),
    (["verify", "--suite", "solutions", "--max-order", "3"], EXIT_PASS),
    (["verify", "--suite", "numeric", "--max-order", "2"], EXIT_PASS),
    (["numcheck", "--family", "abel", "--order", "2", "--constants", "0,-1", "--interval",
      "1/4,1/2"], EXIT_FAIL),
    (["numcheck", "--family", "riccati", "--order", "3", "--constants", "1,1,1", "--interval",
      "0,2"], EXIT_FAIL),
    (["solve", "--family", "riccati", "--order", "2", "--constants", "0.5,0"], EXIT_USAGE),
    (["solve", "--family", "riccati", "--order", "2", "--constants", "1"], EXIT_USAGE),
    (["solve", "--family", "riccati", "--order", "0"], EXIT_USAGE),
    (["symmetry", "--family", "riccati", "--c", "2*^x"], EXIT_USAGE),
    (["symmetry", "--family", "riccati", "--c", "exp(2*x)+x^2"], EXIT_INTERNAL),
    (["numcheck", "--family", "riccati", "--order", "2", "--constants", "0,0"], EXIT_USAGE),
    (["numcheck", "--family", "riccati", "--order", "2", "--constants", "0,0", "--interval",
      "1"], EXIT_USAGE),
    (["frobnicate"], EXIT_USAGE),
    (["chain", "--family", "kdv", "--order", "2"], EXIT_USAGE),
    (["chain", "--order", "2"], EXIT_USAGE),
    (["verify", "--suite", "nope"], EXIT_USAGE),
    ([], EXIT_USAGE),
])
def test_exit_code_matrix(argv, code, capsys):
    assert main(argv) == code


def test_max_order_env(monkeypatch, capsys):
    monkeypatch.setenv("CHAINLAB_MAX_ORDER", "3")
    assert main(["chain", "--family", "riccati", "--order", "4"]) == EXIT_USAGE
    assert "CHAINLAB_MAX_ORDER" in capsys.readouterr().err
    assert main(["chain", "--family", "riccati", "--order", "3"]) == EXIT_PASS


def test_parse_error_reports_offset(capsys):
    code, _, err = _run(capsys, "symmetry", "--family", "abel", "--c", "2*^x")
    assert code == EXIT_USAGE and "offset 2" in err


def test_command_validation():
    with pytest.raises(UsageError):
        Command("launch", None, None, None, "text", {})
    with pytest.raises(UsageError):
        Command("chain", None, 0, None, "text", {})


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chainlab.cli", "chain", "--family", "abel",
                           "--order", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "u_2 + 4*u^2*u_1 + u^5 = 0" in proc.stdout
