import csv
import io
import json
import subprocess
import sys

import pytest

from lambdabv.cli import dispatch
from lambdabv.stepfn import from_pieces, loads


@pytest.fixture
def fn_file(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(from_pieces([0, 10, 9, 20]).dumps())
    return str(path)


def run(argv, capsys):
    code = dispatch(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_variation_structured(fn_file, capsys):
    code, out, _ = run(["variation", "--function", fn_file, "--lambda", "constant:1", "--exact"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["value"] == 22 and doc["exact"]
    assert doc["witness"] == [[0, 0.25], [0.25, 0.5], [0.5, 1]]


def test_variation_merge_regression(fn_file, tmp_path, capsys):
    out = tmp_path / "v.csv"
    code, _, err = run(["variation", "--function", fn_file, "--lambda", "explicit:1,100",
                        "--exact", "--format", "csv", "--output", str(out)], capsys)
    rows = list(csv.reader(out.open()))
    assert code == 0
    assert rows == [["a", "b", "increment"], ["0.0", "1.0", "20.0"]]
    assert json.loads(err)["value"] == 20


def test_embed_check_csv(tmp_path, capsys):
    summary = tmp_path / "s.json"
    code, out, _ = run(["embed-check", "--lambda", "power:1", "--omega", "power:2", "--n-max", "16384",
                        "--summary", str(summary)], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[-1]["n"] == "16384"
    s = json.loads(summary.read_text())
    assert s["verdict"] == "divergent"


def test_embed_check_baselines(capsys):
    for beta, verdict in (("1", "bounded"), ("2", "divergent")):
        code, out, _ = run(["embed-check", "--lambda", "constant:1", "--omega", f"power:{beta}",
                            "--format", "structured"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["verdict"] == verdict and doc["n_max"] == 2 ** 14


def test_counterexample_round_trip(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    code, out, _ = run(["counterexample", "--lambda", "constant:1", "--omega", "power:2",
                        "--stages", "3", "--g-out", str(gpath)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["certified"]
    assert [st["n"] for st in doc["plan"]["stages"]] == [17, 257, 4097]
    text = gpath.read_text()
    g = loads(text)
    assert g.dumps() + "\n" == text


def test_extremal(capsys):
    code, out, _ = run(["extremal", "--lambda", "explicit:1,2,3", "--n", "3", "--r", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["k_star"] == 1 and doc["value"] == doc["vertex_oracle"] == 1


def test_modulus_profile(tmp_path, capsys):
    f = tmp_path / "ind.json"
    f.write_text(json.dumps({"breakpoints": [0, 0.5, 1], "values": [0, 1], "periodic": False}))
    code, out, _ = run(["modulus", "--function", str(f), "--delta", "0.1", "--profile"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["omega_q"] == pytest.approx(0.1)


@pytest.mark.parametrize("argv, expected", [
    (["counterexample", "--lambda", "constant:1", "--omega", "power:1", "--stages", "1",
      "--n-limit", "1024"], 1),
    (["embed-check", "--lambda", "power:1", "--omega", "tabulated:0:0,0.5:0,1:1", "--n-max", "64"], 1),
    (["variation", "--function", "/nonexistent.json", "--lambda", "constant:1"], 2),
    (["variation", "--lambda", "constant:1"], 2),
    (["frobnicate"], 2),
    (["embed-check", "--lambda", "power:7", "--omega", "power:1"], 2),
    (["embed-check", "--lambda", "constant:1", "--omega", "power:1", "--n-max", "8"], 2),
    (["counterexample", "--lambda", "constant:1", "--omega", "power:2", "--relax", "x"], 2),
])
def test_exit_code_matrix(argv, expected, capsys):
    try:
        code = dispatch(argv)
    except SystemExit as exc:
        code = exc.code
    _, err = capsys.readouterr()
    assert code == expected
    assert err.strip()


def test_malformed_and_refused(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert dispatch(["variation", "--function", str(bad), "--lambda", "constant:1"]) == 2
    big = tmp_path / "big.json"
    big.write_text(from_pieces(list(range(20))).dumps())
    assert dispatch(["variation", "--function", str(big), "--lambda", "constant:1", "--exact"]) == 2
    assert dispatch(["variation", "--function", str(big), "--lambda", "constant:1"]) == 0
    capsys.readouterr()


def test_entry_point_subprocess(fn_file):
    proc = subprocess.run([sys.executable, "-m", "lambdabv", "variation", "--function", fn_file,
                           "--lambda", "constant:1"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 22
    proc = subprocess.run([sys.executable, "-m", "lambdabv", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2
