import json
import subprocess
import sys

import jsonschema
import pytest

from relcm.cli import ToolError, golden_name, main, read_command_file, render
from relcm.report import SCHEMA

from conftest import CORPUS, ROOT

WS = CORPUS / "workspaces"
SCHEMA_DOC = json.loads((ROOT / "docs" / "report.schema.json").read_text())


def run_json(*argv):
    return json.loads(render([str(a) for a in argv]))


def verdicts_without_route(obj, path="$"):
    """Paths of JSON objects that carry a verdict but no route."""
    out = []
    if isinstance(obj, dict):
        if "verdict" in obj and "route" not in obj:
            out.append(path)
        for k, v in obj.items():
            out.extend(verdicts_without_route(v, f"{path}.{k}"))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            out.extend(verdicts_without_route(v, f"{path}[{i}]"))
    return out


def test_example_d_sequence_command():
    rep = run_json(WS / "example45.ws", "check-sequence", "--kind", "d", "--seq", "a1,a2,a3", "--module", "R")
    assert rep["schema"] == SCHEMA
    res = rep["result"]
    assert res["verdict"] == "fails"
    assert res["witness"]["element"] == "(v)"


def test_classify_two_planes_command():
    rep = run_json(WS / "two_planes.ws", "classify", "--ideal", "m", "--module", "TwoPlanes")
    assert rep["result"]["flags"]["quasiBuchsbaum"]["verdict"] == "true"


def test_verify_theorem_command():
    rep = run_json(WS / "two_planes.ws", "verify-theorem", "--id", "2.6", "--ideal", "m", "--module",
                   "TwoPlanes", "--seq", "squares", "--ell", "1")
    res = rep["result"]
    assert res["theoremId"] == "2.6" and res["clauses"]
    assert all("route" in c for c in res["clauses"])


def test_exit_codes(tmp_path, capsys):
    ws = str(WS / "two_planes.ws")
    assert main([ws, "classify", "--ideal", "m", "--module", "TwoPlanes"]) == 0
    # a mathematical "fails" is still a completed run
    assert main([str(WS / "example45.ws"), "check-sequence", "--kind", "d", "--seq", "s", "--module", "R"]) == 0
    assert main([ws, "classify", "--ideal", "m", "--module", "Nope"]) == 1
    assert "no module named 'Nope'" in capsys.readouterr().err
    bad = tmp_path / "bad.ws"
    bad.write_text("ring Q[x];\nlet f = q;\n")
    assert main([str(bad), "classify", "--ideal", "m", "--module", "S"]) == 1
    assert "line 2" in capsys.readouterr().err
    assert main([str(tmp_path / "missing.ws"), "classify", "--ideal", "m", "--module", "S"]) == 1
    with pytest.raises(SystemExit) as exc:
        main([ws, "frobnicate"])
    assert exc.value.code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "relcm", str(WS / "principal.ws"), "rsop", "--ideal", "a",
                           "--module", "S"], capture_output=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"]["name"] == "rsop"


def test_output_flag(tmp_path):
    out = tmp_path / "r.json"
    argv = [str(WS / "two_planes.ws"), "rsop", "--ideal", "m", "--module", "TwoPlanes"]
    assert main(argv + ["--output", str(out)]) == 0
    assert out.read_bytes() == render(argv)


def test_byte_identical_repeats():
    argv = [str(WS / "two_planes.ws"), "classify", "--ideal", "m", "--module", "TwoPlanes"]
    assert render(argv) == render(argv)


def test_timing_is_opt_in():
    argv = [str(WS / "principal.ws"), "rsop", "--ideal", "a", "--module", "S"]
    assert "wallClockSeconds" not in run_json(*argv)
    assert "wallClockSeconds" in run_json(*argv, "--timing")


def test_budget_env_override(monkeypatch):
    argv = [str(WS / "principal.ws"), "check-sequence", "--kind", "usd", "--seq", "x", "--ideal", "a",
            "--module", "S"]
    # the workspace option wins over the environment, the flag wins over both
    monkeypatch.setenv("RELCM_BUDGET_B", "5")
    assert "option budget.B = 3;" in (WS / "principal.ws").read_text()
    assert run_json(*argv)["budget"]["B"] == 3
    assert run_json(*argv, "--budget-B", "2")["budget"]["B"] == 2


def test_budget_env_default(monkeypatch, tmp_path):
    ws = tmp_path / "w.ws"
    ws.write_text("ring Q[x];\nideal a = <x>;\nmodule S = free (0);\n")
    argv = [str(ws), "check-sequence", "--kind", "usd", "--seq", "x", "--ideal", "a", "--module", "S"]
    monkeypatch.setenv("RELCM_BUDGET_B", "4")
    assert run_json(*argv)["budget"]["B"] == 4
    monkeypatch.delenv("RELCM_BUDGET_B")
    assert run_json(*argv)["budget"]["B"] == 3


def test_text_output_lists_hypotheses():
    text = render([str(WS / "example45.ws"), "classify", "--ideal", "a", "--module", "R", "--format",
                   "text"]).decode()
    assert "hypothesis: a in Jacobson radical [violated]" in text
    assert "ledger: Jacobson-radical hypothesis violated" in text


def test_command_file_helpers(tmp_path):
    f = tmp_path / "c.cmds"
    f.write_text("# comment\n\nclassify --ideal m --module 'Two Planes'\nrsop --format text\n")
    cmds = read_command_file(f)
    assert cmds == [["classify", "--ideal", "m", "--module", "Two Planes"], ["rsop", "--format", "text"]]
    assert golden_name(0, cmds[0]) == "00.json" and golden_name(11, cmds[1]) == "11.txt"


def test_tool_error_is_raised_by_render():
    with pytest.raises(ToolError):
        render([str(WS / "two_planes.ws"), "localcohom", "--ideal", "m", "--module", "TwoPlanes",
                "--window", "3", "-3"])


def _golden_json():
    return sorted((CORPUS / "golden").glob("*/*.json"))


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA_DOC)


@pytest.mark.parametrize("path", _golden_json(), ids=lambda p: f"{p.parent.name}/{p.name}")
def test_golden_reports_validate_and_carry_routes(path):
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, SCHEMA_DOC)
    assert verdicts_without_route(doc) == []
