import json
import subprocess
import sys

import numpy as np
import pytest

from ladder4.cli import main, read_config
from ladder4.lineshape import find_peaks
from ladder4.sweep import read_sweep_csv


def test_steady_json(capsys):
    assert main(["steady", "--omega", "20,2,20", "--delta", "0,0,0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    rho = np.array(doc["rho_real"]) + 1j * np.array(doc["rho_imag"])
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(rho, rho.conj().T, atol=1e-12)
    assert doc["params"]["omega3"] == 20.0
    assert doc["absorption"]["im_rho21"] == rho[0, 1].imag


def test_sweep_negative_range_single_peak(tmp_path):
    out = tmp_path / "s.csv"
    argv = [
        "sweep", "--vary", "delta3", "--range", "-20:20:0.02", "--observable", "im_rho21",
        "--method", "exact", "--omega", "4,20,4", "--out", str(out),
    ]
    assert main(argv) == 0
    rep = find_peaks(read_sweep_csv(out).profile())
    assert rep.count == 1 and abs(rep.locations[0]) <= 0.02


def test_sweep_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# resonance cut\nomega = 20,2,0\nvary = omega3\nrange = 0:4:1\nobservable = rho33\n")
    assert main(["sweep", "--config", str(cfg), "--observable", "rho44"]) == 0
    text = capsys.readouterr().out
    assert "# observable=rho44" in text and "# omega1=20.0" in text
    assert text.count(",ok") == 5


def test_read_config_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["sweep", "--config", str(cfg)]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--vary", "delta1"],
        ["sweep", "--vary", "delta1", "--range", "0:1"],
        ["sweep", "--vary", "delta1", "--range", "1:0:0.1"],
        ["sweep", "--vary", "delta1", "--range", "0:1:0.5", "--omega", "1,2"],
        ["sweep", "--vary", "delta1", "--range", "0:1:0.5", "--omega", "-1,0,0"],
        ["sweep", "--vary", "delta1", "--range", "0:1:0.5", "--method", "analytic-doublet", "--observable", "rho22"],
        ["steady", "--gamma", "0,1,1"],
        ["figure", "13"],
        ["verify", "--only", "42"],
    ],
)
def test_argument_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_figure_command(tmp_path, capsys):
    assert main(["figure", "2", "--out", str(tmp_path)]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig02_a.csv", "fig02_b.csv", "fig02_c.csv", "fig02_summary.json"]
    assert "PASS line_center_dip_with_upper_field" in capsys.readouterr().out


def test_erratum_command(capsys):
    assert main(["erratum"]) == 0
    out = capsys.readouterr().out
    assert "order1-rho13" in out and "unresolved gated entries: 0" in out


def test_verify_exit_codes(capsys):
    assert main(["verify", "--only", "6,9"]) == 1  # 9b is out of reach
    out = capsys.readouterr().out
    assert "PASS [6]" in out and "FAIL [9b]" in out and "PASS [9a]" in out
    assert main(["verify", "--only", "6"]) == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ladder4", "steady", "--omega", "1,0,0"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["trace"] == pytest.approx(1.0)
