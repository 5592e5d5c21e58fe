import json
import subprocess
import sys

import pytest

from branchlaw.cli import RunConfig, UsageError, csv_text, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_psi_eval(capsys):
    code, out = run(capsys, "psi", "2", "2", "--eval", "1,1")
    doc = json.loads(out)
    assert code == 0 and doc["value"] == "64" and doc["schema_version"] == 1


def test_psi_polynomial_and_norm(capsys):
    code, out = run(capsys, "psi", "4", "2", "1")
    doc = json.loads(out)
    assert doc["polynomial"]["terms"] == [{"partition": [1, 0], "coeff": "2"}]
    assert doc["norm_sq"] == "32"


def test_coeffs(capsys):
    code, out = run(capsys, "coeffs", "5", "1", "2")
    rows = json.loads(out)["coefficients"]
    assert rows[1]["A"] == "5" and rows[1]["B"] == "-25/4" and rows[1]["C"] == "1/4"


def test_measure_json_and_csv(capsys, tmp_path):
    path = tmp_path / "d.csv"
    code, out = run(capsys, "measure", "9", "2", "--grid", "0.5:3:4", "--csv", str(path))
    doc = json.loads(out)
    assert [a["y"] for a in doc["atoms"]] == ["-25/16", "-1/16"]
    assert doc["atoms"][0]["casimir"] == "-7/2"
    lines = path.read_text().splitlines()
    assert lines[0] == "x,density" and len(lines) == 5
    code, out = run(capsys, "measure", "5", "1", "--grid", "0.5:3:4", "--format", "csv")
    assert out.splitlines()[1].startswith("0.5,")


def test_spectrum(capsys):
    code, out = run(capsys, "spectrum", "4", "2")
    assert json.loads(out)["atoms"] == []


def test_verify_recurrence(capsys):
    code, out = run(capsys, "verify", "recurrence", "5", "1", "8")
    assert code == 0 and json.loads(out)["pass"]


def test_verify_failure_exit_code(capsys):
    # an impossible tolerance makes the quadrature suite fail, not crash
    code, out = run(capsys, "verify", "orthogonality", "5", "1", "3", "--tol", "1e-30")
    assert code == 1 and not json.loads(out)["pass"]


@pytest.mark.parametrize("argv", [
    ["coeffs", "1", "3", "2"],
    ["measure", "5", "1", "--grid", "3:1:5"],
    ["t1", "5", "1", "--z", "0.3,0.2"],
    ["t1", "5", "1", "--z", "1.5"],
    ["psi", "1"],
    ["verify", "recurrence", "5"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_t1_and_env(capsys, monkeypatch):
    monkeypatch.setenv("BRANCHLAW_SEED", "17")
    monkeypatch.setenv("BRANCHLAW_THREADS", "2")
    code, out = run(capsys, "t1", "5", "1", "--z", "0.5", "--N", "20000")
    doc = json.loads(out)
    assert doc["seed"] == 17 and doc["environment"] == {"threads": 2, "seed_source": "env"}
    assert doc["agree_3sigma"]
    monkeypatch.setenv("BRANCHLAW_SEED", "x")
    assert main(["t1", "5", "1", "--z", "0.5", "--N", "100"]) == 2


def test_byte_identical_output(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        proc = subprocess.run([sys.executable, "-m", "branchlaw", "t1", "6", "2", "--z", "0.3,0.2",
                               "--N", "30000", "--seed", "5", "-o", str(path)], capture_output=True)
        assert proc.returncode == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_subprocess_usage_exit():
    proc = subprocess.run([sys.executable, "-m", "branchlaw", "spectrum", "2", "5"], capture_output=True)
    assert proc.returncode == 2


def test_run_config():
    with pytest.raises(UsageError):
        RunConfig(3, 1, tolerance=0)
    with pytest.raises(UsageError):
        RunConfig(3, 1, seed=-1)
    assert RunConfig(3, 1).k_max == 6


def test_csv_format():
    text = csv_text(["x", "y"], [(0.1, 1 / 3)])
    assert text == "x,y\n0.10000000000000001,0.33333333333333331\n"
