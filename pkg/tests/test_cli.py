import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

from ordpart.cli import SELFTEST_COMMANDS, run
from ordpart.partition import Coloring, RectangleWitness, verify_witness


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(list(argv))
    text = out.getvalue()
    return code, (json.loads(text) if text.strip().startswith("{") else text), err.getvalue()


def test_ord_commands():
    assert call("ord", "add", "w+1", "w")[1]["result"] == "w*2"
    assert call("ord", "mul", "w+1", "2")[1]["result"] == "w*2 + 1"
    assert call("ord", "cmp", "w^2", "w*5")[1]["result"] == 1
    assert call("ord", "indec", "w^2")[1]["result"] is True


def test_type_commands():
    assert call("type", "classify", "eta + 1")[1]["result"] == "class-eta"
    assert call("type", "embeds", "w + w*", "w* + w")[1]["result"] == "No"
    code, out, _ = call("type", "scattered", "eta")
    assert code == 0 and out["result"] is False


def test_usage_errors_exit_64():
    assert call("ord", "add", "w+", "1")[0] == 64
    assert call("check", "--rows", "2", "--cols", "2", "--targets", "1")[0] == 64
    assert call("nonsense")[0] == 64
    assert call("ord", "add", "w")[0] == 64


def test_check_exit_codes_and_certificates(tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = call("check", "--rows", "2", "--cols", "2", "--targets", "1 2 / 2 1", "--out", str(cert))
    assert code == 1
    assert json.loads(cert.read_text())["coloring"]["data"] == [[0, 1], [1, 0]]
    assert call("check", "--verify", str(cert))[0] == 0
    cert.unlink()
    code, out, _ = call("check", "--rows", "7", "--cols", "3", "--targets", "2 / 2", "--colors", "2", "--out", str(cert))
    assert code == 0 and out["result"] == "holds"
    # a relation that holds has no single certificate
    assert not cert.exists()
    path = tmp_path / "c.json"
    path.write_text(json.dumps(Coloring.from_table([[0, 0], [0, 0]], 2).to_json()))
    assert call("check", "--coloring", str(path), "--targets", "2 2 / 2 2", "--out", str(cert))[0] == 0
    assert call("check", "--verify", str(cert))[0] == 0
    data = json.loads(cert.read_text())
    assert data["kind"] == "witness"
    data["witness"]["color"] = 1 - data["witness"]["color"]
    cert.write_text(json.dumps(data))
    assert call("check", "--verify", str(cert))[0] == 1


def test_check_explicit_coloring(tmp_path):
    path = tmp_path / "c.json"
    c = Coloring.from_table([[0, 0, 1], [0, 0, 1], [1, 1, 1]], 2)
    path.write_text(json.dumps(c.to_json()))
    code, out, _ = call("check", "--coloring", str(path), "--targets", "2 2 / 2 2")
    assert code == 0
    w = RectangleWitness.from_json(out["witness"])
    assert verify_witness(c, w)


def test_extract_pipelines(tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = call("--seed", "3", "extract", "power-sum", "--alpha", "2", "--beta", "2",
                        "--n", "2", "--bound", "16", "--out", str(out_file))
    assert code == 0 and out["status"] == "witness" and out["scope"] == "finite instance"
    cert = json.loads(out_file.read_text())
    assert cert["witness"] == out["witness"]
    assert call("check", "--verify", str(out_file))[0] == 0
    code, out, _ = call("--seed", "7", "extract", "patterns", "--k", "1", "--m", "1", "--n", "2", "--bound", "20")
    assert code in (0, 2) and out["scope"] == "finite instance"
    code, out, _ = call("--seed", "5", "extract", "split", "--size", "10")
    assert code == 0 and out["case"] in (0, 1, 2)


def test_witness_commands():
    assert call("witness", "index-order", "--N", "50")[1]["ok"] is True
    code, out, _ = call("witness", "refute-one", "--gamma", "3", "--block", "2")
    assert code == 1 and out["status"] == "violation" and out["pair"] == [3, [2, 12]]
    code, out, _ = call("witness", "refute-zero")
    assert code == 1 and out["status"] == "violation"
    code, out, _ = call("witness", "orr", "--index", "eta")
    assert code == 64
    code, out, _ = call("witness", "stabilize", "--n", "1", "--rows", "3", "--bound", "5")
    assert code == 0 and out["deviations"] == 0


def test_table_format():
    code, out, _ = call("--format", "table", "ord", "add", "w+1", "w")
    assert code == 0 and "result" in out and "w*2" in out


def test_selftest_in_process():
    code, out, _ = call("selftest")
    assert code == 0 and out["ok"] and len(out["commands"]) == len(SELFTEST_COMMANDS)


@pytest.mark.parametrize("cmd", [SELFTEST_COMMANDS[0], SELFTEST_COMMANDS[11], SELFTEST_COMMANDS[-1]])
def test_subprocess_runs_are_byte_identical(cmd):
    runs = [subprocess.run([sys.executable, "-m", "ordpart", *cmd], capture_output=True, timeout=120)
            for _ in range(2)]
    assert runs[0].stdout == runs[1].stdout and runs[0].returncode == runs[1].returncode
    assert runs[0].stdout
