import csv
import io
import json
import subprocess
import sys

import pytest

from steinapprox.cli import main

SC = {"id": "cw", "dist": "rademacher", "g": {"name": "square_sum", "d": 1},
      "h": {"name": "sin"}, "p": 2, "n_grid": [100], "N": 100_000, "seed": 5, "bounds": ["cor41"]}


def write(tmp_path, doc, name="c.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_bound_json_contains_cor41_total(tmp_path, capsys):
    assert main(["bound", "--config", write(tmp_path, SC)]) == 0
    doc = json.loads(capsys.readouterr().out)
    (rep,) = doc["reports"]
    assert rep["total"] == pytest.approx(9.1098, abs=1e-4)
    assert rep["scenario"] == "cw" and rep["seed"] == 5


def test_bound_zero_norms(tmp_path, capsys):
    doc = dict(SC, h={"name": "sin", "norms": [0] * 8}, bounds=["cor41", "cor42", "theorem32"])
    assert main(["bound", "--config", write(tmp_path, doc), "--format", "csv"]) == 0
    assert all(float(r["total"]) == 0 for r in rows(capsys.readouterr().out))


def test_exit_codes(tmp_path, capsys):
    bad = dict(SC, dist="standardized_exponential", p=3, bounds=["theorem32"])
    assert main(["bound", "--config", write(tmp_path, bad)]) == 2
    assert "E X^k = E Z^k" in capsys.readouterr().err
    assert main(["bound", "--config", write(tmp_path, dict(SC, N=5))]) == 2
    assert "N" in capsys.readouterr().err
    assert main(["bound", "--config", str(tmp_path / "missing.json")]) == 1
    assert main(["bound"]) == 2


def test_distance_csv_schema_and_provenance(tmp_path, capsys):
    assert main(["distance", "--config", write(tmp_path, SC), "--no-timestamp"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "scenario,n,N,delta_mean,delta_stderr,bound_total,margin,seed,bound_id"
    (row,) = rows(out)
    assert row["scenario"] == "cw" and row["seed"] == "5" and row["bound_id"] == "cor41"
    assert float(row["margin"]) > 0


def test_distance_exact_null(tmp_path, capsys):
    doc = dict(SC, dist="standard_normal", bounds=[], n_grid=[16, 32, 64, 128, 256], N=1_000_000)
    assert main(["distance", "--config", write(tmp_path, doc), "--no-timestamp"]) == 0
    for row in rows(capsys.readouterr().out):
        assert abs(float(row["delta_mean"])) < 4 * float(row["delta_stderr"])


def test_byte_identical_without_timestamp(tmp_path):
    cfg = write(tmp_path, SC)
    outs = []
    for jobs in ("1", "3"):
        out = tmp_path / f"o{jobs}"
        assert main(["distance", "--config", cfg, "--no-timestamp", "--out", str(out),
                     "--jobs", jobs]) == 0
        outs.append((out / "distance.csv").read_bytes())
    assert outs[0] == outs[1]
    stamped = tmp_path / "stamped"
    assert main(["distance", "--config", cfg, "--out", str(stamped)]) == 0
    text = (stamped / "distance.csv").read_text()
    assert text.startswith("# steinapprox")
    assert text.split("\n", 1)[1].encode() == outs[0]


def test_seed_and_samples_overrides(tmp_path, capsys):
    assert main(["distance", "--config", write(tmp_path, SC), "--no-timestamp", "--seed", "77",
                 "--samples", "20000"]) == 0
    (row,) = rows(capsys.readouterr().out)
    assert row["seed"] == "77" and row["N"] == "20000"


def test_rate_command(tmp_path, capsys):
    assert main(["rate", "--preset", "rate_even", "--samples", "2000000", "--no-timestamp"]) == 0
    out = rows(capsys.readouterr().out)
    assert len(out) == 5
    slope = float(out[0]["slope"])
    assert -1.25 <= slope <= -0.8
    null = dict(SC, dist="standard_normal", n_grid=[16, 32, 64, 128], bounds=[])
    assert main(["rate", "--config", write(tmp_path, null), "--no-timestamp"]) == 1


def test_solve_command(tmp_path, capsys):
    doc = dict(SC, solve_grid=[-1.0, 0.0, 1.0])
    assert main(["solve", "--config", write(tmp_path, doc), "--no-timestamp"]) == 0
    out = rows(capsys.readouterr().out)
    assert [float(r["w"]) for r in out] == [-1.0, 0.0, 1.0]
    assert all(float(r["residual"]) < 1e-4 for r in out)
    assert float(out[0]["f"]) == pytest.approx(float(out[2]["f"]), abs=1e-8)


def test_selftest_subprocess():
    proc = subprocess.run([sys.executable, "-m", "steinapprox", "selftest"], capture_output=True,
                          text=True, timeout=300)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "all checks passed" in proc.stdout
