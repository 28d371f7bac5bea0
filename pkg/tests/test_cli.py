import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from tunnelkit import cli, fit
from tunnelkit.simmons import JunctionSpec


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_times_row_count(capsys):
    code, out, _ = run(capsys, "times", "--v0", "1.8", "--length", "20.8", "--eta", "0,0.005",
                       "--grid", "0.05,1.75,100")
    assert code == 0
    data = rows(out)
    assert len(data) == 200
    assert list(data[0]) == list(cli.times.CSV_COLUMNS)
    assert {r["eta"] for r in data} == {"0.0", "0.005"}


def test_times_default_grid_and_oracle(capsys):
    code, out, _ = run(capsys, "times", "--eta", "0", "--grid", "0.1,1.7,5", "--oracle")
    data = rows(out)
    assert code == 0 and len(data) == 5
    for r in data:
        ratio = float(r["tau_d_improved_fs"]) / float(r["exact_dwell_fs"])
        assert 0.9 < ratio < 1.1
    code, out, _ = run(capsys, "times")
    assert len(rows(out)) == 300


def test_times_deterministic(capsys):
    args = ("times", "--grid", "0.2,1.6,4", "--eta", "0.002", "--format", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    assert len(json.loads(a)) == 4


def test_eta_max(capsys):
    code, out, _ = run(capsys, "eta-max", "--v0", "1.8", "--length", "20.8", "--energy", "0.9")
    assert code == 0
    assert float(rows(out)[0]["eta_max_evfs_per_ang2"]) == pytest.approx(7.690e-3, rel=2e-4)


def test_energy_loss_curve(capsys):
    code, out, _ = run(capsys, "energy-loss", "--eta", "0.005")
    data = rows(out)
    assert code == 0 and len(data) == 19
    fracs = [float(r["fraction_lost"]) for r in data]
    assert all(b < a for a, b in zip(fracs, fracs[1:]))
    assert data[0]["admissible"] == "false" and data[-1]["admissible"] == "true"


@pytest.mark.parametrize("argv", [
    ("times", "--grid", "0.1,1.9,10"),
    ("times", "--grid", "0.1,1.0,1"),
    ("times", "--grid", "0.1,1.0"),
    ("times", "--grid", "0,1.0,3"),
    ("times", "--format", "xml"),
    ("times", "--eta", "a,b"),
    ("iv-predict",),
    ("bogus",),
    (),
])
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = cli.run(list(argv))
        raise SystemExit(code)
    assert info.value.code == 1
    assert "usage" in capsys.readouterr().err


def test_model_error_exit_2(capsys):
    code, _, err = run(capsys, "times", "--v0", "20", "--length", "200", "--grid", "0.5,1,2",
                       "--eta", "0")
    assert code == 2
    assert "DegenerateSplit" in err and "E=0.5" in err


def test_config_file_and_env(capsys, tmp_path, monkeypatch):
    f = tmp_path / "b.cfg"
    f.write_text("v0_ev = 1.0\nlength_angstrom = 10\n")
    _, out, _ = run(capsys, "eta-max", "--config", str(f), "--energy", "0.5")
    via_file = float(rows(out)[0]["eta_max_evfs_per_ang2"])
    monkeypatch.setenv("TUNNELKIT_CONFIG", str(f))
    _, out, _ = run(capsys, "eta-max", "--energy", "0.5")
    assert float(rows(out)[0]["eta_max_evfs_per_ang2"]) == via_file
    _, out, _ = run(capsys, "eta-max", "--energy", "0.5", "--length", "20")
    assert float(rows(out)[0]["eta_max_evfs_per_ang2"]) == pytest.approx(via_file / 2)
    code, _, _ = run(capsys, "eta-max", "--config", str(tmp_path / "missing.cfg"))
    assert code == 1


def test_iv_predict(capsys, tmp_path):
    target = tmp_path / "iv.csv"
    code, _, _ = run(capsys, "iv-predict", "--area", "1e-8", "--eta", "0,0.005",
                     "--vgrid", "0.1,0.5,5", "--output", str(target))
    data = rows(target.read_text())
    assert code == 0 and len(data) == 10
    first = float(data[0]["current_density_a_m2"])
    assert first == pytest.approx(0.7478167226, rel=1e-8)
    assert float(data[0]["current_a"]) == pytest.approx(first * 1e-8)


def test_iv_predict_out_of_regime(capsys):
    code, _, err = run(capsys, "iv-predict", "--area", "1e-8", "--vgrid", "0.1,2.0,3")
    assert code == 2 and "OutOfRegime" in err


@pytest.fixture
def junction_csv(tmp_path):
    j = JunctionSpec(1.799, 20.8, 1e-8)
    v = np.linspace(0.02, 0.5, 50)
    curves = [fit.synthetic_curve(t, e, j, v) for t, e in ((10, 0.005), (100, 0.004), (300, 0.002))]
    path = tmp_path / "junction.csv"
    with open(path, "w") as fh:
        fit.write_iv_csv(curves, fh)
    return path


def test_iv_fit_roundtrip(capsys, junction_csv):
    code, out, _ = run(capsys, "iv-fit", "--data", str(junction_csv), "--v0", "1.799",
                       "--length", "20.8", "--area", "1e-8")
    data = rows(out)
    assert code == 0
    assert [float(r["eta_evfs_per_ang2"]) for r in data] == pytest.approx(
        [0.005, 0.004, 0.002], rel=1e-10)
    code, out, _ = run(capsys, "iv-fit", "--data", str(junction_csv), "--area", "1e-8",
                       "--temperature", "100")
    assert len(rows(out)) == 1
    code, _, _ = run(capsys, "iv-fit", "--data", str(junction_csv), "--area", "1e-8",
                     "--temperature", "77")
    assert code == 1


def test_iv_fit_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("temperature_k,voltage_v,current_a\n10,0.1,1e-9\n10,x,2e-9\n10,0.3,3e-9\n10,0.4,4e-9\n")
    code, _, err = run(capsys, "iv-fit", "--data", str(bad), "--area", "1e-8")
    assert code == 2 and "ParseError: line 3" in err
    code, out, err = run(capsys, "iv-fit", "--data", str(bad), "--area", "1e-8", "--lenient")
    assert code == 0 and "rejected line 3: malformed" in err and len(rows(out)) == 1


def test_sweep_json(capsys, junction_csv):
    with open(junction_csv, "a") as fh:
        fh.write("150,0.1,-1e-9\n150,0.2,-2e-9\n150,0.3,-3e-9\n")
    code, out, err = run(capsys, "sweep", "--data", str(junction_csv), "--area", "1e-8",
                         "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert [r["temperature_k"] for r in doc["results"]] == [10.0, 100.0, 300.0]
    assert doc["errors"][0]["error"] == "NonPhysicalFit"
    assert doc["eta_non_increasing"] is True
    code, out, err = run(capsys, "sweep", "--data", str(junction_csv), "--area", "1e-8")
    assert "fit failed at T=150.0" in err and "eta_non_increasing=true" in err


def test_help_documents_columns(capsys):
    with pytest.raises(SystemExit):
        cli.run(["times", "--help"])
    out = capsys.readouterr().out
    for col in cli.times.CSV_COLUMNS:
        assert col in out


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "tunnelkit", "eta-max", "--energy", "0.9"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "0.00769" in out.stdout


def test_config_eta_used_without_flag(capsys, tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text("eta_evfs_per_ang2 = 0.003\n")
    _, out, _ = run(capsys, "times", "--config", str(f), "--grid", "0.5,1.0,2")
    assert {r["eta"] for r in rows(out)} == {"0.003"}
    _, out, _ = run(capsys, "times", "--config", str(f), "--grid", "0.5,1.0,2", "--eta", "0")
    assert {r["eta"] for r in rows(out)} == {"0.0"}
