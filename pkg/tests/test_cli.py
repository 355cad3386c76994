from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from bstc.cli import main
from bstc.fixtures import alpha_gap, cyclic_pairs, encode_choice
from bstc.syntax import formula_to_text

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_demo_data_matches_fixtures():
    assert json.loads((DATA / "cyclic_pairs.choice.json").read_text()) == cyclic_pairs().to_json()
    assert json.loads((DATA / "alpha_gap.choice.json").read_text()) == alpha_gap().to_json()


def test_sat_verdicts():
    f = str(DATA / "cyclic_pairs.bstc")
    assert run("sat", f, "--semantics", "warp") == (1, "unsat\n")
    assert run("sat", f, "--semantics", "beta") == (0, "sat\n")
    assert run("sat", str(DATA / "alpha_gap.bstc"), "--semantics", "alpha")[0] == 1


def test_sat_model_text():
    code, text = run("sat", str(DATA / "cyclic_pairs.bstc"), "--semantics", "unrestricted", "--model")
    assert code == 0
    assert "universe: a1 a2 a3" in text
    assert "c({a1,a2}) = {a1}" in text


def test_sat_json_and_verify_round_trip(tmp_path):
    formula = DATA / "strict_subset.bstc"
    code, text = run("sat", str(formula), "--semantics", "alpha", "--model", "--json")
    assert code == 0
    obj = json.loads(text)
    assert obj["verdict"] == "sat"
    model = tmp_path / "model.json"
    model.write_text(json.dumps(obj["model"]))
    assert run("sat", str(formula), "--semantics", "alpha", "--verify-model", str(model)) == (0, "verified\n")
    other = tmp_path / "other.bstc"
    other.write_text("X = 0")
    assert run("sat", str(other), "--semantics", "alpha", "--verify-model", str(model)) == (1, "not a model\n")


def test_check():
    f = str(DATA / "alpha_gap.choice.json")
    assert run("check", f, "--axiom", "alpha") == (0, "(alpha) holds\n")
    code, text = run("check", f, "--axiom", "warp")
    assert code == 1 and text == "(warp) violated: A = {x,z}, B = {x,z,w}\n"
    code, text = run("check", f, "--axiom", "beta", "--json")
    obj = json.loads(text)
    assert code == 1 and obj["holds"] is False and len(obj["witness"]) == 2


def test_lift_certificates():
    code, text = run("lift", str(DATA / "alpha_gap.choice.json"), "--axiom", "alpha")
    assert code == 1 and "(the whole domain)" in text
    code, text = run("lift", str(DATA / "cyclic_pairs.choice.json"), "--axiom", "warp", "--json")
    obj = json.loads(text)
    assert code == 1 and obj["certificate"]["kind"] == "strict-cycle"
    assert len(obj["certificate"]["regions"]) == 3


def test_lift_construct():
    code, text = run("lift", str(DATA / "single_menu.choice.json"), "--axiom", "warp", "--construct", "--json")
    obj = json.loads(text)
    assert code == 0 and obj["liftable"]
    assert len(obj["witness"]["choice"]) == 7
    assert obj["layers"] == [[["y"]], [["x"]]]


def test_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("X sub Y and not Y sub X"))
    assert run("sat", "-", "--semantics", "unrestricted") == (0, "sat\n")


def test_parse_error_location(tmp_path, capsys):
    bad = tmp_path / "bad.bstc"
    bad.write_text("X sub\n")
    assert run("sat", str(bad), "--semantics", "alpha")[0] == 2
    assert f"{bad}:2:1:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["sat", "missing.bstc", "--semantics", "alpha"],
    ["sat", "x.bstc"],
    ["check", str(DATA / "cyclic_pairs.bstc"), "--axiom", "alpha"],
    ["lift", str(DATA / "cyclic_pairs.choice.json"), "--axiom", "gamma"],
    ["sat", str(DATA / "cyclic_pairs.bstc"), "--semantics", "alpha", "--max-places", "0"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_resource_limit_exit_code(capsys):
    code, _ = run("sat", str(DATA / "cyclic_pairs.bstc"), "--semantics", "alpha", "--max-places", "2")
    assert code == 2
    assert "resource limit" in capsys.readouterr().err


def test_env_place_cap(monkeypatch):
    monkeypatch.setenv("BSTC_MAX_PLACES", "2")
    assert run("sat", str(DATA / "cyclic_pairs.bstc"), "--semantics", "alpha")[0] == 2


def test_oracle_subcommand():
    code, text = run("oracle", "sat", str(DATA / "cyclic_pairs.bstc"), "--semantics", "warp")
    assert code == 1 and text.startswith("NoModelWithinBudget")
    assert run("oracle", "lift", str(DATA / "cyclic_pairs.choice.json"), "--axiom", "beta") == (0, "liftable\n")


def test_encodings_in_demo_data_are_current():
    text = (DATA / "cyclic_pairs.bstc").read_text()
    body = "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))
    assert body.split() == formula_to_text(encode_choice(cyclic_pairs())).split()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bstc", "check", str(DATA / "alpha_gap.choice.json"),
                           "--axiom", "alpha"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "(alpha) holds\n"
