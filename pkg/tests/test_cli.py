import json
import subprocess
import sys

import pytest

from spanmackey.cli import COMMANDS, run
from spanmackey.groups import named_group
from spanmackey.mackey import burnside_mackey


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, err = call(capsys, *argv)
    return code, json.loads(out) if out.strip() else None


def test_marks(capsys):
    code, rep = report(capsys, "marks", '{"family": "cyclic", "n": 2}')
    assert code == 0 and rep["matrix"] == [[2, 0], [1, 1]]


def test_tomdieck(capsys):
    code, rep = report(capsys, "tomdieck", '{"family": "symmetric", "n": 3, "X": "S3/C2"}')
    assert code == 0 and rep["ok"]
    top = rep["classes"][-1]
    assert top["class"] == "S3" and top["rank_direct"] == top["rank_splitting"] == 2


def test_corrupted_mackey(capsys):
    G = named_group("symmetric", 3)
    data = burnside_mackey(G).to_json()
    entry = next(t for t in data["tr"] if t["class"] == 3 and len(t["subgroup"]) == 2)
    entry["matrix"][0][0] += 1
    code, rep = report(capsys, "mackey-check", "--group", "S3", json.dumps({"mackey": data}))
    assert code == 1 and not rep["ok"]
    witness = next(a["witness"] for a in rep["axioms"] if a["axiom"] == "double_coset_formula" and not a["ok"])
    assert witness["double_coset_representatives"]


def test_clean_mackey(capsys):
    code, rep = report(capsys, "mackey-check", "--group", "D4")
    assert code == 0 and rep["ok"]


@pytest.mark.parametrize("argv", [
    ["group-info", "--group", "Q8"],
    ["subgroups", "--group", "A4"],
    ["burnside-mul", "--group", "S3", '{"x": "S3/C2", "y": "S3/C2"}'],
    ["span-compose", "--group", "S3", '{"first": {"transfer": ["C2", "S3"]}, "second": {"restriction": ["S3", "C2"]}}'],
    ["hfix", "--group", "C2", '{"X": "pt", "H": "C2"}'],
    ["transfer", "--group", "C2", '{"from": "e", "to": "C2"}'],
    ["adjunction-check", "--group", "C2", '{"from": "e", "to": "C2"}'],
    ["bc-check", "--group", "C2", '{"from": "e", "to": "C2", "control": true}'],
    ["k0", "--group", "C2", '{"X": "pt"}'],
    ["a-pi0", "--group", "C3"],
])
def test_commands_succeed(capsys, argv):
    code, rep = report(capsys, *argv)
    assert code == 0 and rep is not None


def test_command_list_is_covered():
    assert len(COMMANDS) == 13


def test_specific_outputs(capsys):
    _, rep = report(capsys, "burnside-mul", "--group", "S3", '{"x": "S3/C2", "y": "S3/C2"}')
    assert rep["product"] == [1, 1, 0, 0]
    _, rep = report(capsys, "span-compose", "--group", "S3",
                    '{"first": {"transfer": ["C2", "S3"]}, "second": {"restriction": ["S3", "C2"]}}')
    assert rep["middle_size"] == 9 and rep["orbit_types"] == ["C2", "e"]
    _, rep = report(capsys, "hfix", "--group", "C2", '{"X": "pt", "H": "C2"}')
    assert rep["iso_classes"] == 4
    _, rep = report(capsys, "bc-check", "--group", "C2", '{"from": "e", "to": "C2", "control": true}')
    assert rep["ok"] and rep["pullback"] and not rep["control"]["pullback"] and not rep["control"]["all_iso"]
    _, rep = report(capsys, "k0", "--group", "C2", '{"X": "C2/e"}')
    assert rep["rank"] == 1


@pytest.mark.parametrize("argv", [
    ["marks", "--group", "nonsense"],
    ["marks", "{not json"],
    ["burnside-mul", "--group", "S3", '{"x": "S3/C2"}'],
    ["k0", "--group", "S3", '{"X": "S3/Z9"}'],
    ["marks", "--group", "C2", "--bound", "-1"],
    ["hfix", "--group", "S3", '{"X": "S3/e", "bound": 3}'],
])
def test_input_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_text_format_and_out_file(capsys, tmp_path):
    path = tmp_path / "marks.txt"
    code, out, _ = call(capsys, "marks", "--group", "C2", "--format", "text", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("labels:")


def test_payload_from_file(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"family": "dihedral", "n": 4}')
    code, rep = report(capsys, "group-info", f"@{path}")
    assert code == 0 and rep["order"] == 8


def test_deterministic_output():
    argv = [sys.executable, "-m", "spanmackey.cli", "a-pi0", "--group", "S3", '{"X": "S3/C2"}']
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first
