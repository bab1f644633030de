"""Command line interface: golden outputs, determinism, exit codes."""

import json
import os

import pytest

from arithjet.cli import (EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_USAGE,
                          canonical_json, main)

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def _run(capsys, argv):
    rc = main(argv)
    return rc, capsys.readouterr().out


def test_witt_table_golden(capsys):
    rc, out = _run(capsys, ["witt-table", "--triple", "Z2", "--level", "1"])
    assert rc == EXIT_OK
    with open(os.path.join(GOLDEN, "witt_table_z2_n1.json")) as fh:
        assert out == fh.read()


def test_witt_table_determinism(capsys):
    argv = ["witt-table", "--triple", "GAUSS", "--level", "1"]
    rc1, out1 = _run(capsys, argv)
    rc2, out2 = _run(capsys, argv)
    assert rc1 == rc2 == EXIT_OK and out1 == out2
    obj = json.loads(out1)
    assert canonical_json(obj) == out1


def test_witt_table_inline_triple(capsys):
    rc, out = _run(capsys, [
        "witt-table", "--level", "1",
        "--triple", json.dumps({"g": [0, 1], "pi": [2], "q": 2})])
    assert rc == EXIT_OK
    with open(os.path.join(GOLDEN, "witt_table_z2_n1.json")) as fh:
        assert out == fh.read()


def test_witt_table_cache_round_trip(tmp_path, capsys):
    argv = ["witt-table", "--triple", "Z3", "--level", "1",
            "--cache", str(tmp_path)]
    rc1, out1 = _run(capsys, argv)
    assert rc1 == EXIT_OK
    cached = list((tmp_path / "witt").iterdir())
    assert len(cached) == 1
    rc2, out2 = _run(capsys, argv)
    assert rc2 == EXIT_OK and out1 == out2


def test_corrupted_cache_exits_1(tmp_path, capsys):
    argv = ["witt-table", "--triple", "Z3", "--level", "1",
            "--cache", str(tmp_path)]
    assert _run(capsys, argv)[0] == EXIT_OK
    path = next((tmp_path / "witt").iterdir())
    obj = json.loads(path.read_text())
    obj["S"][1]["terms"][0][1][0] += 3
    path.write_text(json.dumps(obj))
    assert _run(capsys, argv)[0] == EXIT_FAIL


def test_cap_exits_2(capsys):
    rc, _ = _run(capsys, ["witt-table", "--triple", "EISEN",
                          "--level", "20", "--cap", "64"])
    assert rc == EXIT_CAP


def test_usage_errors_exit_4(capsys):
    assert main(["no-such-command"]) == EXIT_USAGE
    capsys.readouterr()
    assert main(["witt-table", "--triple", "not json"]) == EXIT_USAGE
    capsys.readouterr()
    assert main([]) == EXIT_USAGE


def test_witt_op_add(capsys):
    rc, out = _run(capsys, [
        "witt-op", "--op", "add", "--triple", "Z2", "--level", "1",
        "--ring", json.dumps({"m": 2, "tower": []}),
        "--vectors", "[[1,0],[1,0]]"])
    assert rc == EXIT_OK
    assert json.loads(out) == {"components": [0, 1]}


def test_witt_op_ghost(capsys):
    rc, out = _run(capsys, [
        "witt-op", "--op", "ghost", "--triple", "Z2", "--level", "1",
        "--ring", json.dumps({"m": 4, "tower": []}),
        "--vectors", "[[1,1]]"])
    assert rc == EXIT_OK
    assert json.loads(out) == {"ghost": [1, 3]}


def _presentation_file(tmp_path):
    pres = {
        "generators": [["x", 0]],
        "relations": [{"vars": [["x", 0, 0]], "terms": [[[2], [1]]]}],
        "name": "Z[x]/(x^2)",
    }
    path = tmp_path / "pres.json"
    path.write_text(json.dumps(pres))
    return str(path)


def test_jet_command(capsys, tmp_path):
    rc, out = _run(capsys, ["jet", _presentation_file(tmp_path),
                            "--triple", "Z2", "--level", "1"])
    assert rc == EXIT_OK
    obj = json.loads(out)
    assert obj["level"] == 1
    assert obj["generators"] == [["x", 0, 0], ["x", 0, 1]]
    assert len(obj["relations"]) == 2


def test_adjoint_check_command(capsys, tmp_path):
    rc, out = _run(capsys, [
        "adjoint-check", _presentation_file(tmp_path),
        "--triple", "Z2", "--level", "1",
        "--ring", json.dumps({"m": 2, "tower": [[1, 1, 1]]})])
    assert rc == EXIT_OK
    obj = json.loads(out)
    assert obj["pass"] and obj["count_witt"] == obj["count_jet"]
    assert obj["seed"] == 0


def test_localize_check_command(capsys, tmp_path):
    pres = {"generators": [["x", 0]], "relations": []}
    path = tmp_path / "free.json"
    path.write_text(json.dumps(pres))
    element = {"vars": [["x", 0, 0]], "terms": [[[1], [1]]]}
    rc, out = _run(capsys, [
        "localize-check", str(path), "--triple", "Z2", "--level", "1",
        "--element", json.dumps(element),
        "--ring", json.dumps({"m": 2, "tower": []})])
    assert rc == EXIT_OK
    assert json.loads(out)["pass"]


def test_greenberg_command(capsys, tmp_path):
    rc, out = _run(capsys, [
        "greenberg", _presentation_file(tmp_path), "--triple", "Z2",
        "--m", "2", "--mode", "compare",
        "--ring", json.dumps({"m": 2, "tower": []})])
    assert rc == EXIT_OK
    obj = json.loads(out)
    assert obj["pass"]
    rc, out = _run(capsys, [
        "greenberg", _presentation_file(tmp_path), "--triple", "Z2",
        "--m", "2", "--mode", "transform"])
    assert rc == EXIT_OK
    obj = json.loads(out)
    assert len(obj["generators"]) == 2


def test_verify_single_suite(capsys):
    rc, out = _run(capsys, ["verify", "--suite", "operators",
                            "--triple", "Z2"])
    assert rc == EXIT_OK
    obj = json.loads(out)
    assert obj["pass"] and obj["suites"]["operators"]["pass"]
    assert obj["seed"] == 0
