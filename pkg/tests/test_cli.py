import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from structpista import harness
from structpista.cli import main, oracle_check
from structpista.harness import Method


def test_missing_seed_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--true-image", "synthetic:32", "--psf", "motion:5"])
    assert exc.value.code == 1
    assert "--seed" in capsys.readouterr().err


def test_unknown_generator_is_usage_error(capsys):
    assert main(["simulate", "--true-image", "nothing:3", "--psf", "motion:5", "--seed", "0"]) == 1
    assert main(["simulate", "--true-image", "synthetic:32", "--psf", "motion:x", "--seed", "0"]) == 1


def test_bad_bc_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["restore", "--true-image", "synthetic:32", "--psf", "motion:5", "--seed", "0",
              "--method", "ISTA", "--bc", "spherical"])
    assert exc.value.code == 1


def test_simulate_writes_outputs(tmp_path, capsys):
    out = tmp_path / "sim"
    code = main(["simulate", "--true-image", "synthetic:40", "--psf", "motion:7",
                 "--noise", "2", "--seed", "3", "--crop-margin", "4", "--out-dir", str(out)])
    assert code == 0
    assert "delta" in capsys.readouterr().out
    meta = json.loads((out / "simulate.json").read_text())
    g = np.load(out / "observed.npy")
    assert g.shape == (32, 32) and meta["shape"] == [32, 32]
    assert (out / "observed.pgm").exists() and (out / "truth.pgm").exists()


def test_restore_and_sweep(tmp_path, capsys):
    args = ["--true-image", "synthetic:40", "--psf", "motion:7", "--noise", "2", "--seed", "3",
            "--crop-margin", "4", "--bc", "reflective"]
    assert main(["restore", *args, "--method", "SPISTA_H", "--mu", "0.01",
                 "--out-dir", str(tmp_path / "r")]) == 0
    assert (tmp_path / "r" / "SPISTA_H_mu0.01.pgm").exists()
    assert main(["sweep", *args, "--method", "PISTA_L", "--mu-grid", "log:-3:-1:3",
                 "--out-dir", str(tmp_path / "s")]) == 0
    with open(tmp_path / "s" / "results.csv") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 4 and rows[0][0] == "method"
    assert "*" in capsys.readouterr().out


def test_solver_failure_exit_code(monkeypatch):
    def boom(*args, **kwargs):
        raise FloatingPointError("synthetic failure")

    monkeypatch.setitem(harness._RUNNERS, Method.ISTA, (boom, harness.RegKind.HFUNCTION))
    code = main(["restore", "--true-image", "synthetic:32", "--psf", "motion:5", "--seed", "0",
                 "--method", "ISTA", "--mu", "0.01"])
    assert code == 2


def test_psf_file_input(tmp_path):
    from structpista.imagecore import write_psf_text
    from structpista.scenes import gaussian_psf

    write_psf_text(gaussian_psf(5, (1.0, 1.0)), tmp_path / "psf.txt")
    assert main(["restore", "--true-image", "synthetic:32", "--psf", str(tmp_path / "psf.txt"),
                 "--seed", "1", "--method", "AITGP", "--bc", "zero"]) == 0


def test_oracle_check(capsys):
    worst = oracle_check(sizes=(4,), trials=3)
    assert set(worst) == {"zero", "periodic", "reflective", "antireflective", "frame"}
    assert max(worst.values()) <= 1e-12
    assert main(["oracle-check", "--sizes", "4,5", "--trials", "2"]) == 0
    assert capsys.readouterr().out.count("PASS") == 5
    assert main(["oracle-check", "--sizes", "4", "--trials", "2", "--tol", "0"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "structpista", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    for name in ("simulate", "restore", "sweep", "compare", "oracle-check"):
        assert name in proc.stdout
