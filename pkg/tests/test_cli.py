"""Command-line behavior: outputs, exit codes, and config handling."""

import numpy as np
import pytest

import capmimo as cm
from capmimo.cli import main
from capmimo.errors import NumericalFailure


def test_unknown_command_exits_one(capsys):
    assert main(["nonsense"]) == 1
    assert "error:" in capsys.readouterr().err


def test_invalid_number_list_exits_one(capsys):
    assert main(["sweep-power", "--powers", "abc"]) == 1
    assert "comma-separated" in capsys.readouterr().err


def test_sweep_power_writes_rows(tmp_path, capsys):
    out = tmp_path / "power.csv"
    code = main([
        "sweep-power", "--powers", "100", "--scheme", "mf",
        "--seeds", "1", "--serial", "--out", str(out),
    ])
    assert code == 0
    assert "wrote 1 rows" in capsys.readouterr().out
    rows = cm.parse_results(out)
    assert rows[0]["scheme"] == "mf" and rows[0]["error"] == ""


def test_sweep_aperture_jsonl_output(tmp_path):
    out = tmp_path / "aperture.jsonl"
    code = main([
        "sweep-aperture", "--areas", "0.25", "--scheme", "mf",
        "--seeds", "1", "--serial", "--format", "jsonl", "--out", str(out),
    ])
    assert code == 0
    rows = cm.parse_results(out)
    assert rows[0]["variable"] == "aperture_m2" and rows[0]["value"] == 0.25


def test_sweep_geometry_writes_labeled_curves(tmp_path):
    out = tmp_path / "geometry.csv"
    code = main([
        "sweep-geometry", "--radii", "10", "--heights", "2,5", "--scheme", "mf",
        "--seeds", "1", "--serial", "--out", str(out),
    ])
    assert code == 0
    labels = sorted(r["scheme"] for r in cm.parse_results(out))
    assert labels == ["mf-L2", "mf-L5"]


def test_failed_rows_exit_two(tmp_path, capsys, monkeypatch):
    def boom(scenario, config=None):
        raise NumericalFailure("synthetic failure")

    monkeypatch.setattr(cm.experiments, "run_pdm", boom)
    out = tmp_path / "power.csv"
    code = main([
        "sweep-power", "--powers", "100", "--scheme", "pdm,mf",
        "--seeds", "1", "--serial", "--out", str(out),
    ])
    assert code == 2
    assert "failed: pdm" in capsys.readouterr().err
    rows = {r["scheme"]: r for r in cm.parse_results(out)}
    assert rows["pdm"]["error"].startswith("NumericalFailure")
    assert rows["mf"]["error"] == ""


def test_nf_flag_pins_coefficient_count(tmp_path):
    out = tmp_path / "solve.csv"
    code = main([
        "solve", "--scheme", "pdm", "--nf", "9", "--seeds", "1", "--out", str(out),
    ])
    assert code == 0
    assert cm.parse_results(out)[0]["scheme"] == "pdm-nf9"


def test_solve_reports_best_run(capsys):
    assert main(["solve", "--scheme", "mf", "--seeds", "1"]) == 0
    out = capsys.readouterr().out
    assert "scheme=mf" in out and "sum_rate=" in out


def test_solve_with_config_file(tmp_path, capsys):
    config = tmp_path / "run.toml"
    config.write_text(
        'pt_ma2 = 50.0\nusers = [[0.0, 0.0, 10.0], [3.0, 0.0, 10.0]]\nscheme = "mf"\n',
        encoding="utf-8",
    )
    assert main(["solve", "--config", str(config), "--seeds", "1"]) == 0
    assert "scheme=mf" in capsys.readouterr().out


def test_bad_config_exits_one(tmp_path, capsys):
    config = tmp_path / "bad.toml"
    config.write_text("mystery = 1\n", encoding="utf-8")
    assert main(["solve", "--config", str(config)]) == 1
    assert "mystery" in capsys.readouterr().err


def test_wavenumber_gain_command(tmp_path):
    out = tmp_path / "gain.csv"
    code = main([
        "wavenumber-gain", "--distances", "1", "--freqs", "2.4", "--out", str(out),
    ])
    assert code == 0
    rows = cm.parse_results(out)
    assert len(rows) == 601
    assert {r["distance_m"] for r in rows} == {1.0}


def test_dump_patterns_mf(tmp_path, scenario):
    out = tmp_path / "patterns.csv"
    code = main(["dump-patterns", "--scheme", "mf", "--out", str(out)])
    assert code == 0
    rows = cm.parse_results(out)
    assert len(rows) == len(scenario.users) * scenario.grid_nx * scenario.grid_ny
    amps = np.array([r["amp_x_norm"] for r in rows])
    assert amps.max() == pytest.approx(1.0, rel=1e-12)


def test_dump_patterns_rejects_multiple_schemes(capsys):
    assert main(["dump-patterns", "--scheme", "mf,pdm"]) == 1
    assert "exactly one scheme" in capsys.readouterr().err


def test_unwritable_output_exits_one(tmp_path, capsys):
    out = tmp_path / "no" / "dir" / "x.csv"
    code = main([
        "sweep-power", "--powers", "100", "--scheme", "mf",
        "--seeds", "1", "--serial", "--out", str(out),
    ])
    assert code == 1
    assert "error:" in capsys.readouterr().err
