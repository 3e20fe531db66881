import json

import pytest

from des_sentinel import io
from des_sentinel.cli import EXIT_ERROR, EXIT_NEGATIVE, EXIT_POSITIVE, RunConfig, run
from des_sentinel.supercon import SupervisorMap


@pytest.fixture
def files(tmp_path, ex1, ex2):
    def put(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return {
        "g1": put("g1.json", io.automaton_to_json(ex1.plant)),
        "v1": put("v1.json", io.supervisor_to_json(ex1.supervisor, ex1.alphabet)),
        "d1": put("d1.json", io.automaton_to_json(ex1.damage)),
        "g2": put("g2.json", io.automaton_to_json(ex2.plant)),
        "v2": put("v2.json", io.supervisor_to_json(ex2.supervisor, ex2.alphabet)),
        "d2": put("d2.json", io.automaton_to_json(ex2.damage)),
        "dir": tmp_path,
    }


def read(path):
    with open(path) as fh:
        return json.load(fh)


def test_synth_then_check(files):
    out = str(files["dir"] / "attack.json")
    assert run(["synth-attack", "--plant", files["g1"], "--supervisor", files["v1"], "--damage", files["d1"],
                "--out", out]) == EXIT_POSITIVE
    data = read(out)
    assert data["risky_pair"]["s"] == "abc"
    assert data["risky_pair"]["t"] == ["d", "e", ""]
    verdict = str(files["dir"] / "verdict.json")
    assert run(["check-attack", "--plant", files["g1"], "--supervisor", files["v1"], "--damage", files["d1"],
                "--attack", out, "--out", verdict]) == EXIT_POSITIVE
    assert read(verdict)["smart"] is True
    assert run(["check-attack", "--plant", files["g1"], "--supervisor", files["v1"], "--damage", files["d1"],
                "--attack", out, "--mode", "strong", "--out", verdict]) == EXIT_NEGATIVE


def test_export_dot_of_attack(files, capsys):
    out = str(files["dir"] / "attack.json")
    run(["synth-attack", "--plant", files["g1"], "--supervisor", files["v1"], "--damage", files["d1"], "--out", out])
    capsys.readouterr()
    assert run(["export-dot", out, "--name", "A"]) == EXIT_POSITIVE
    text = capsys.readouterr().out
    assert text.startswith('digraph "A"') and 'label="a/d"' in text


def test_synth_attack_negative(files, capsys):
    code = run(["synth-attack", "--plant", files["g2"], "--supervisor", files["v2"], "--damage", files["d2"]])
    assert code == EXIT_NEGATIVE
    assert json.loads(capsys.readouterr().out) == {"attack": None}


def test_decide_example2(files, capsys, ex2):
    assert run(["decide-resilient", "--plant", files["g2"], "--damage", files["d2"], "--bound", "1"]) == EXIT_POSITIVE
    data = json.loads(capsys.readouterr().out)
    assert data["outcome"] == "exists"
    assert io.supervisor_from_json(data["supervisor"], ex2.alphabet) == ex2.supervisor
    assert data["supervisor"]["entries"] == {"": ["a", "c", "v"], "a": ["c", "v"], "ac": ["c", "v"]}


def test_decide_negative(files, tmp_path, ex2):
    p = tmp_path / "eps.json"
    p.write_text(json.dumps({"symbols": list(ex2.alphabet.names), "states": ["0"], "initial": "0",
                             "marked": ["0"], "transitions": []}))
    assert run(["decide-resilient", "--plant", files["g2"], "--damage", str(p)]) == EXIT_NEGATIVE


def test_verify_supervisor(files, tmp_path, capsys, ex2):
    assert run(["verify-supervisor", "--plant", files["g2"], "--supervisor", files["v2"],
                "--damage", files["d2"]]) == EXIT_POSITIVE
    assert json.loads(capsys.readouterr().out)["resilient"] is True
    loose = SupervisorMap({(): frozenset("abcv"), ("a",): frozenset("cv"), ("b",): frozenset("dcv")},
                          ex2.alphabet.uncontrollable)
    p = tmp_path / "loose.json"
    p.write_text(json.dumps(io.supervisor_to_json(loose, ex2.alphabet)))
    assert run(["verify-supervisor", "--plant", files["g2"], "--supervisor", str(p),
                "--damage", files["d2"]]) == EXIT_NEGATIVE
    out = json.loads(capsys.readouterr().out)
    assert out["resilient"] is False and out["risky_pair"]["s"] == "ad"


def test_protected_flag_changes_outcome(files, capsys):
    # with a, b and c protected nothing on the damaging branch can be faked
    code = run(["synth-attack", "--plant", files["g1"], "--supervisor", files["v1"], "--damage", files["d1"],
                "--protected", "a,b,c"])
    assert code == EXIT_NEGATIVE


def test_errors_are_json_on_stderr(files, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run(["decide-resilient", "--plant", str(bad), "--damage", files["d2"]]) == EXIT_ERROR
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "FormatError"
    assert run(["decide-resilient", "--plant", str(tmp_path / "missing.json"), "--damage", files["d2"]]) == EXIT_ERROR
    assert json.loads(capsys.readouterr().err)["error"] == "FileNotFoundError"
    assert run(["decide-resilient", "--plant", files["g2"], "--damage", files["d2"], "--bound", "-1"]) == EXIT_ERROR
    assert json.loads(capsys.readouterr().err)["error"] == "ValueError"
    assert run(["decide-resilient", "--plant", files["g2"], "--damage", files["d2"],
                "--max-patterns", "4"]) == EXIT_ERROR
    assert json.loads(capsys.readouterr().err)["error"] == "GuardError"
    assert run(["no-such-command"]) == EXIT_ERROR


def test_selftest(capsys):
    assert run(["selftest"]) == EXIT_POSITIVE
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3 and all(line.startswith("PASS") for line in lines)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(bound=-1)
    with pytest.raises(ValueError):
        RunConfig(max_states=0)
    assert RunConfig().bound == 1
