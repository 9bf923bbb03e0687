import csv
import json
import subprocess
import sys

import pytest

from dessins.cli import main


def run_cli(*argv):
    return main(list(argv))


def test_strata_counts(capsys):
    assert run_cli("strata", "--n", "5", "--counts") == 0
    out = capsys.readouterr().out
    assert "codim 0: 1, codim 1: 10, codim 2: 15" in out


def test_strata_validation_error(capsys):
    assert run_cli("strata", "--n", "2") == 1
    assert "between 3 and 8" in capsys.readouterr().err


def test_strata_dot_files(tmp_path):
    outdir = tmp_path / "dots"
    assert run_cli("strata", "--n", "4", "--dot", str(outdir)) == 0
    files = sorted(outdir.glob("*.dot"))
    assert len(files) == 4
    assert files[0].read_text().startswith("graph ")


def test_strata_json_and_csv(tmp_path):
    jpath = tmp_path / "strata.json"
    cpath = tmp_path / "counts.csv"
    assert run_cli("strata", "--n", "4", "--json", str(jpath), "--csv", str(cpath)) == 0
    payload = json.loads(jpath.read_text())
    assert len(payload) == 4
    assert {"labels", "tree", "tail_labels", "codim"} <= set(payload[0])
    rows = list(csv.reader(cpath.read_text().splitlines()))
    assert rows[0] == ["codim", "count"]
    assert rows[1:] == [["0", "1"], ["1", "3"]]


def test_strata_poset_and_clean(tmp_path):
    ppath = tmp_path / "poset.txt"
    cdir = tmp_path / "clean"
    assert run_cli("strata", "--n", "4", "--poset", str(ppath), "--clean", str(cdir)) == 0
    assert len(ppath.read_text().splitlines()) == 3  # each divisor under the corolla
    assert len(list(cdir.glob("*.dot"))) == 3


def test_hopf_coproduct(capsys):
    assert run_cli("hopf", "--tree", "j0[j0]", "--coproduct") == 0
    out = capsys.readouterr().out
    assert "(3 terms)" in out


def test_hopf_parse_error(capsys):
    assert run_cli("hopf", "--tree", "j0[j0") == 1
    assert "error" in capsys.readouterr().err


def test_hopf_verify_exit_zero():
    assert run_cli("hopf", "--verify", "--max-vertices", "4") == 0


def test_qsm_build(capsys):
    assert run_cli("qsm", "build", "--m", "12", "--k", "auto", "--N", "10",
                   "--D", "2", "--lmax", "6") == 0
    out = capsys.readouterr().out
    assert "basis size 127" in out
    assert "fixed labels [0, 6] (k=2)" in out


def test_qsm_k_mismatch(capsys):
    assert run_cli("qsm", "build", "--k", "3") == 1
    assert "fixed labels" in capsys.readouterr().err


def test_qsm_partition_value(capsys):
    assert run_cli("qsm", "partition", "--beta", "1", "--model", "word") == 0
    out = capsys.readouterr().out
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["beta", "Z", "phi_beta_real", "phi_beta_imag", "tail_bound"]
    assert float(rows[1][1]) == pytest.approx(1.25)


def test_qsm_partition_divergent(capsys):
    assert run_cli("qsm", "partition", "--beta", "0", "--N", "1") == 1
    err = capsys.readouterr().err
    assert ">= 1" in err


def test_qsm_partition_beta_range(tmp_path):
    out = tmp_path / "z.csv"
    assert run_cli("qsm", "partition", "--beta", "1..3", "--out", str(out)) == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert len(rows) == 4


def test_qsm_gibbs(tmp_path):
    out = tmp_path / "gibbs.csv"
    assert run_cli("qsm", "gibbs", "--tree", "j6[j0]", "--beta", "2",
                   "--out", str(out)) == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["beta", "Z", "phi_beta_real", "phi_beta_imag", "tail_bound"]
    val = complex(float(rows[1][2]), float(rows[1][3]))
    # phi(X_(6[0])) = zeta^6 / 4 = -1/4, scaled by 1/Z
    z = float(rows[1][1])
    assert val == pytest.approx((-0.25) / z, abs=1e-12)


def test_qsm_verify_exit_zero():
    assert run_cli("qsm", "verify") == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dessins", "strata", "--n", "4",
                           "--counts"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "codim 0: 1" in proc.stdout
