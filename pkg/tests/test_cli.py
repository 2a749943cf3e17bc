import json
import subprocess
import sys

import pytest

from repcert.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_euler_trivial(capsys):
    code, doc = run(capsys, "euler", "--trivial", "--genus", "2")
    assert code == 0 and doc["report"]["euler"] == 0 and doc["schema_version"] == "1"


def test_euler_and_w2_bent(capsys):
    code, doc = run(capsys, "euler", "--t", "5/7")
    assert code == 0 and doc["report"]["euler"] == -1 and doc["report"]["parity_ok"]
    code, doc = run(capsys, "w2")
    assert code == 0 and doc["report"]["w2"] == 1 and doc["t"] is None


def test_goldman_word(capsys):
    code, doc = run(capsys, "goldman", "--word", "x1 x3")
    assert code == 0
    assert doc["degree_profile"]["leading_coefficient_22"] == "8/3"
    assert doc["killed"] is False
    code, doc = run(capsys, "goldman", "--word", "x1 x2 x1^-1 x2^-1 x3 x4 x3^-1 x4^-1", "--t", "2")
    assert code == 0 and doc["is_identity"] is True


def test_bad_token_exit_2(capsys):
    code, doc = run(capsys, "goldman", "--word", "x1 x9")
    assert code == 2 and doc["error"]["token"] == "x9"
    code, doc = run(capsys, "euler", "--t", "0.5")
    assert code == 2 and doc["error"]["token"] == "0.5"
    code, doc = run(capsys, "goldman", "--alpha", "1", "--word", "x1 x3")
    assert code == 2 and "error" in doc


def test_section4(capsys):
    code, doc = run(capsys, "section4")
    s = doc["section4"]
    assert code == 0 and (s["euler"], s["euler_sigma"]) == (2, 0)
    assert s["class_h_sigma"] == "elliptic"


def test_scan_small(capsys):
    code, doc = run(capsys, "scan", "--max-syllables", "1", "--syllable-len", "1")
    assert code == 0 and doc["scan"]["degree_anomalies"] == []
    assert doc["scan"]["killed"] == ["x1 x2 x1^-1 x2^-1 x3 x4 x3^-1 x4^-1"]


def test_pu21_small(capsys):
    code, doc = run(capsys, "pu21", "--samples", "5000")
    assert code == 0 and doc["pu21"]["violations_at_r_a_r_b"] == 0


def test_output_file_and_determinism(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}.json"
        subprocess.run([sys.executable, "-m", "repcert", "--output", str(path), "euler", "--t", "13"],
                       check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["report"]["euler"] == -1


def test_boundary_mismatch_reported(capsys):
    # beta (alpha^2 - 1) = -6 has the wrong sign to glue to the Fuchsian block
    code, doc = run(capsys, "goldman", "--alpha", "2", "--beta", "-2", "--word", "x1 x3")
    assert code == 2 and "-6 d^2" in doc["error"]["message"]
