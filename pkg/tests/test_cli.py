import subprocess
import sys

import pytest

from ccmlab import load_lut
from ccmlab.cli import main, parse_config


def _rows(text):
    lines = text.strip().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


def test_characterize_stdout(capsys):
    assert main(["characterize"]) == 0
    header, rows = _rows(capsys.readouterr().out)
    assert header.startswith("ibo_db,rho,C,")
    assert [r[0] for r in rows] == ["0", "10", "40"]
    assert float(rows[0][2]) == pytest.approx(0.23554250, rel=1e-6)


def test_loops_and_config_override(tmp_path):
    out = tmp_path / "loops.csv"
    assert main(["loops", "--out", str(out)]) == 0
    header, rows = _rows(out.read_text())
    assert header == "index,length,weight,bits"
    assert len(rows) == 32

    conf = tmp_path / "conf.txt"
    conf.write_text("# defaults\nl_max = 8\n")
    assert main(["loops", "--config", str(conf), "--out", str(out)]) == 0
    _, rows = _rows(out.read_text())
    assert len(rows) == 2  # only the two shortest loops fit
    # explicit flag beats the file
    assert main(["loops", "--config", str(conf), "--l-max", "12", "--out", str(out)]) == 0
    _, rows = _rows(out.read_text())
    assert len(rows) == 32


def test_bound_matches_library(capsys):
    assert main(["bound", "--ebn0", "8"]) == 0
    _, rows = _rows(capsys.readouterr().out)
    assert len(rows) == 1
    assert float(rows[0][1]) == pytest.approx(1.39999e-7, rel=1e-4)


def test_simulate_bpsk(tmp_path):
    out = tmp_path / "ber.csv"
    argv = [
        "simulate", "--scheme", "bpsk", "--ebn0", "0",
        "--min-errors", "50", "--max-bits", "50000", "--out", str(out),
    ]
    assert main(argv) == 0
    header, rows = _rows(out.read_text())
    assert header.startswith("ebn0_db,bits,errors,ber")
    assert 0.05 < float(rows[0][3]) < 0.12  # theory: 0.0786


def test_spectrum_summary(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--out", str(out)]) == 0
    assert "min d^2 6.9287" in capsys.readouterr().err
    _, rows = _rows(out.read_text())
    # printed at six digits, so the total carries rounding dust
    assert sum(float(r[2]) for r in rows) == pytest.approx(1.0, abs=1e-5)


def test_optimize_writes_table_and_report(tmp_path, capsys):
    lut = tmp_path / "lut.csv"
    rep = tmp_path / "report.txt"
    argv = [
        "optimize", "--ibo", "40", "--p", "16", "--subsample", "256",
        "--max-iter", "1", "--out-table", str(lut), "--report", str(rep),
    ]
    assert main(argv) == 0
    assert "bound" in capsys.readouterr().out
    table = load_lut(lut)
    assert table.p == 16
    assert "final_bound" in rep.read_text()
    # the written table feeds straight back into the bound command
    assert main(["bound", "--ebn0", "10", "--table", str(lut), "--out", "-"]) == 0


def test_parse_config_rejects_junk(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("no equals sign here\n")
    with pytest.raises(ValueError):
        parse_config(bad)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ccmlab", "loops", "--l-max", "8"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("index,length,weight,bits")
