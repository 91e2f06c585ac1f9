import subprocess
import sys

import pytest

from ab_spectra import io
from ab_spectra.cli import main

FAST = ["--n-default", "600"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_output(capsys):
    code, out, _ = run(capsys, "spectrum", "--kappa", "0.3", *FAST)
    assert code == 0
    assert "mode_star: 0" in out
    assert "multiplicity: 1 (modes 0)" in out
    assert "kappa_canonical: 0.29999999999999999" in out


def test_spectrum_endpoint_and_degenerate(capsys):
    _, out, _ = run(capsys, "spectrum", "--kappa", "0", *FAST)
    assert "deriv_hf: undefined (endpoint)" in out
    _, out, _ = run(capsys, "spectrum", "--kappa", "0.5", *FAST)
    assert "deriv_hf: undefined (degenerate)" in out
    assert "multiplicity: 2 (modes 0, 1)" in out


def test_spectrum_files(capsys, tmp_path):
    rec, mat = tmp_path / "gs.txt", tmp_path / "T.csv"
    code, _, _ = run(capsys, "spectrum", "--kappa", "1.3", "--out", str(rec),
                     "--dump-matrix", str(mat), *FAST)
    assert code == 0
    header, table = io.parse_ground_state_record(rec.read_text())
    assert header["mode_star"] == "1" and table.shape == (600, 2)
    lines = mat.read_text().splitlines()
    assert lines[0] == "d,e" and len(lines) == 601 and lines[-1].endswith(",")


def test_bad_input_exit_2(capsys):
    assert main(["spectrum", "--kappa", "abc"]) == 2
    assert main(["spectrum", "--kappa", "0", "--beta", "0.5"]) == 2
    assert main(["oracle", "--kappa", "0", "--nr", "4", "--ntheta", "16"]) == 2
    assert main(["sweep", "--from", "0", "--to", "1", "--steps", "1"]) == 2
    assert main(["spectrum", "--kappa", "0", "--M", "0"]) == 2
    assert main([]) == 2
    capsys.readouterr()


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("beta = 0.5\nn_default = 600\n")
    assert main(["spectrum", "--kappa", "0", "--config", str(cfg)]) == 2
    assert main(["spectrum", "--kappa", "0", "--config", str(cfg), "--beta", "1"]) == 0
    assert main(["spectrum", "--kappa", "0", "--config", str(tmp_path / "none")]) == 2
    capsys.readouterr()


def test_gauge_command(capsys):
    code, out, _ = run(capsys, "gauge", "--k1", "0.3", "--k2", "1.3", *FAST)
    assert code == 0 and "GQR: yes" in out
    assert "conjugation residual (shift 1): 0" in out
    _, out, _ = run(capsys, "gauge", "--k1", "0.3", "--k2", "0.7", *FAST)
    assert "GQR: no" in out


def test_sweep_to_file(capsys, tmp_path):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "sweep", "--from", "0", "--to", "0.5", "--steps", "3",
                       "--out", str(out_path), *FAST)
    assert code == 0 and "wrote 3 rows" in out
    res = io.sweep_from_csv(out_path.read_text())
    assert res.kappas == [0.0, 0.25, 0.5]
    assert res.hf_derivs[0] is None and res.hf_derivs[1] > 0


def test_sweep_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--from", "0", "--to", "1", "--steps", "2", *FAST)
    assert code == 0 and out.startswith(io.CSV_HEADER)


def test_convergence_command(capsys):
    code, out, _ = run(capsys, "convergence", "--kappa", "0.3", "--n-list", "250", "500", "1000")
    assert code == 0 and "within [1.7, 2.3]" in out
    assert main(["convergence", "--kappa", "0", "--n-list", "100", "200"]) == 2
    capsys.readouterr()


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--kappa", "0", "--nr", "60", "--ntheta", "8")
    assert code == 0
    disc = float(out.split("discrepancy: ")[1].split()[0])
    assert disc <= 1e-8


def test_verify_failure_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "--beta", "0.5")
    assert code == 1
    assert out.startswith("FAIL  potential")


@pytest.mark.slow
def test_verify_defaults_pass():
    proc = subprocess.run([sys.executable, "-m", "ab_spectra", "verify"],
                          capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    lines = proc.stdout.strip().splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1] == "all 13 checks passed"


@pytest.mark.slow
def test_verify_coarse_mesh_flags_discretization():
    proc = subprocess.run([sys.executable, "-m", "ab_spectra", "verify", "--n-default", "50"],
                          capture_output=True, text=True, timeout=600)
    assert proc.returncode == 1
    assert "FAIL  discretization error" in proc.stdout
