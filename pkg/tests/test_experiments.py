"""Scenario plumbing, sweep bookkeeping, result serialization, and configs."""

import numpy as np
import pytest
from dataclasses import replace
from pathlib import Path

import capmimo as cm
from capmimo.errors import ConfigurationError, NumericalFailure
from capmimo.experiments import _RESULT_FIELDS, _order_for_scheme, scheme_label


def test_default_scenario_is_pinned(scenario):
    assert len(scenario.users) == 8
    assert scenario.users[0] == (1.0, 1.0, 30.0)
    assert scenario.users[4] == (5.0, 5.0, 30.0)
    assert (scenario.aperture.lx, scenario.aperture.ly) == (0.5, 0.5)
    assert scenario.budget.pt_ma2 == 100.0
    assert scenario.budget.sigma2 == 5.6e-3
    assert (scenario.order.nx, scenario.order.ny) == (4, 4)
    assert (scenario.grid_nx, scenario.grid_ny) == (32, 32)


def test_scenario_rejects_user_on_aperture(scenario):
    users = list(scenario.users)
    users[2] = (0.05, -0.05, 0.0)
    with pytest.raises(ConfigurationError, match="user 2"):
        replace(scenario, users=tuple(users))


def test_scenario_allows_in_plane_user_outside_aperture(scenario):
    users = list(scenario.users)
    users[0] = (5.0, 5.0, 0.0)
    assert replace(scenario, users=tuple(users)).users[0] == (5.0, 5.0, 0.0)


def test_scenario_validates_shapes(scenario):
    with pytest.raises(ConfigurationError):
        replace(scenario, users=())
    with pytest.raises(ConfigurationError, match="user 1"):
        replace(scenario, users=((1.0, 1.0, 30.0), (1.0, 30.0)))
    with pytest.raises(ConfigurationError):
        replace(scenario, order=cm.TruncationOrder(0, 4, 0))
    with pytest.raises(ConfigurationError):
        replace(scenario, grid_nx=0)


def test_circle_users_evenly_spaced():
    users = cm.circle_users(10.0, 5.0, count=8)
    assert len(users) == 8
    assert users[0] == pytest.approx((10.0, 0.0, 5.0))
    for k, (x, y, z) in enumerate(users):
        angle = 2.0 * np.pi * k / 8
        assert x == pytest.approx(10.0 * np.cos(angle), abs=1e-12)
        assert y == pytest.approx(10.0 * np.sin(angle), abs=1e-12)
        assert z == 5.0


def test_random_scenario_seeded_volume(scenario):
    a = cm.random_scenario(9, scenario)
    b = cm.random_scenario(9, scenario)
    c = cm.random_scenario(10, scenario)
    assert a.users == b.users
    assert a.users != c.users
    assert a.seed == 9
    for x, y, z in a.users:
        assert 2.0 <= np.hypot(x, y) <= 30.0
        assert 2.0 <= z <= 30.0


def test_scheme_label_and_pinned_orders():
    assert scheme_label("pdm", "81") == "pdm-nf81"
    assert scheme_label("pdm", "auto") == "pdm"
    assert scheme_label("mf", "81") == "mf"
    with pytest.raises(ConfigurationError):
        scheme_label("pdm", "50")
    assert _order_for_scheme("pdm-nf9").n_f == 9
    assert _order_for_scheme("pdm-nf225").n_f == 225
    assert _order_for_scheme("pdm") is None
    with pytest.raises(ConfigurationError):
        _order_for_scheme("pdm-nf50")


def test_sweep_power_row_bookkeeping(scenario, grid, channels):
    rows = cm.sweep_power((100.0,), schemes=("mf",), seeds=(1,))
    assert len(rows) == 1
    row = rows[0]
    assert (row.variable, row.value, row.scheme, row.seed) == ("pt_ma2", 100.0, "mf", 1)
    assert row.error == ""
    assert row.iterations == 1
    theta, _ = cm.mf_design(channels, grid, scenario.budget)
    assert row.sum_rate_bps_hz == pytest.approx(
        cm.sum_rate(theta, channels, grid, scenario.budget), rel=1e-12
    )
    assert row.power_a2 == pytest.approx(scenario.budget.pt_a2, rel=1e-12)


def test_sweep_geometry_labels_curves_by_height():
    rows = cm.sweep_geometry((10.0,), heights=(2.0, 5.0), schemes=("mf",), seeds=(1,))
    assert sorted(r.scheme for r in rows) == ["mf-L2", "mf-L5"]
    assert all(r.variable == "radius_m" and r.value == 10.0 for r in rows)


def test_sweep_isolates_row_failures(monkeypatch):
    def boom(scenario, config=None):
        raise NumericalFailure("synthetic failure")

    monkeypatch.setattr(cm.experiments, "run_pdm", boom)
    rows = cm.sweep_power((100.0,), schemes=("pdm", "mf"), seeds=(1,))
    by_scheme = {r.scheme: r for r in rows}
    assert by_scheme["pdm"].error == "NumericalFailure: synthetic failure"
    assert by_scheme["pdm"].sum_rate_bps_hz == 0.0
    assert by_scheme["mf"].error == ""


def test_sweep_rejects_unknown_scheme():
    rows = cm.sweep_power((100.0,), schemes=("nonsense",), seeds=(1,))
    assert rows[0].error.startswith("ConfigurationError")


def test_serial_sweeps_are_reproducible():
    kwargs = dict(schemes=("mf",), seeds=(1, 2))
    first = cm.sweep_power((100.0, 177.8), **kwargs)
    second = cm.sweep_power((100.0, 177.8), **kwargs)
    for a, b in zip(first, second):
        assert replace(a, wall_time_s=0.0) == replace(b, wall_time_s=0.0)


def test_emit_parse_csv_round_trip(tmp_path):
    rows = cm.sweep_power((100.0,), schemes=("mf",), seeds=(1,))
    path = tmp_path / "rows.csv"
    cm.emit_results(rows, path)
    back = cm.parse_results(path)
    assert len(back) == 1
    assert back[0]["scheme"] == "mf"
    assert back[0]["seed"] == 1
    assert isinstance(back[0]["seed"], int)
    assert back[0]["sum_rate_bps_hz"] == pytest.approx(rows[0].sum_rate_bps_hz, rel=1e-12)


def test_emit_parse_jsonl_round_trip(tmp_path):
    rows = cm.sweep_power((100.0,), schemes=("mf",), seeds=(1,))
    path = tmp_path / "rows.jsonl"
    cm.emit_results(rows, path, format="jsonl")
    back = cm.parse_results(path)
    assert back[0]["value"] == 100.0
    assert back[0]["error"] == ""


def test_emit_empty_rows_keeps_header(tmp_path):
    path = tmp_path / "empty.csv"
    cm.emit_results([], path)
    header = path.read_text(encoding="utf-8").strip().split("\r\n")[0]
    assert header.split(",") == _RESULT_FIELDS
    assert cm.parse_results(path) == []


def test_checked_in_fixtures_match_result_columns():
    # the renderer consumes these files; the column contract must not drift
    fixtures = Path(__file__).resolve().parents[1] / "fixtures"
    for name in ("aperture_sweep.csv", "power_sweep.csv", "geometry_sweep.csv"):
        header = (fixtures / name).read_text(encoding="utf-8").splitlines()[0]
        assert header.split(",") == _RESULT_FIELDS, name


def test_emit_rejects_unknown_format(tmp_path):
    with pytest.raises(ConfigurationError):
        cm.emit_results([], tmp_path / "x.bin", format="bin")


def test_emit_wraps_write_failures(tmp_path):
    with pytest.raises(OSError, match="missing"):
        cm.emit_results([], tmp_path / "missing" / "x.csv")


def test_pattern_rows_layout(scenario):
    grid = cm.build_grid(scenario.aperture, 4, 3)
    rng = np.random.default_rng(14)
    patterns = rng.standard_normal((2, grid.count, 3)) + 1j * rng.standard_normal(
        (2, grid.count, 3)
    )
    rows = cm.pattern_rows(patterns, grid)
    assert len(rows) == 2 * grid.count
    first = rows[0]
    assert (first["ix"], first["iy"]) == (0, 0)
    assert rows[5]["ix"] == 1 and rows[5]["iy"] == 1
    assert all(r["nx"] == 4 and r["ny"] == 3 for r in rows)
    for k in (0, 1):
        amps = [r["amp_x_norm"] for r in rows if r["user"] == k]
        assert max(amps) == pytest.approx(1.0, rel=1e-12)
    assert first["re_x"] == pytest.approx(patterns[0, 0, 0].real)


def test_dump_patterns_round_trip(tmp_path, scenario):
    grid = cm.build_grid(scenario.aperture, 4, 4)
    patterns = np.ones((1, grid.count, 3), dtype=complex)
    path = tmp_path / "patterns.csv"
    cm.dump_patterns(patterns, grid, path)
    back = cm.parse_results(path)
    assert len(back) == grid.count
    assert back[0]["amp_x_norm"] == 1.0


def test_load_config_defaults_and_overrides(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('pt_ma2 = 200.0\nusers = [[0.0, 0.0, 10.0]]\n', encoding="utf-8")
    config = cm.load_config(path)
    assert config["pt_ma2"] == 200.0
    assert config["freq_ghz"] == 2.4
    scenario = cm.scenario_from_config(config)
    assert scenario.budget.pt_ma2 == 200.0
    assert scenario.users == ((0.0, 0.0, 10.0),)
    solver = cm.solver_from_config(config)
    assert solver.max_iters == 500
    assert solver.seed == 1


def test_load_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("bogus_key = 1\n", encoding="utf-8")
    with pytest.raises(ConfigurationError, match="bogus_key"):
        cm.load_config(path)


def test_load_config_rejects_bad_toml_and_missing_file(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("pt_ma2 = [unclosed\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        cm.load_config(path)
    with pytest.raises(ConfigurationError):
        cm.load_config(tmp_path / "absent.toml")


def test_wavenumber_gain_study_rows():
    rows = cm.wavenumber_gain_study(distances=(1.0,), kx_points=241)
    assert len(rows) == 241
    gains = np.array([r["gain_db"] for r in rows])
    ratios = np.array([r["kx_over_k0"] for r in rows])
    assert gains.max() == pytest.approx(0.0, abs=1e-12)
    assert ratios[0] == -3.0 and ratios[-1] == 3.0
    # symmetric aperture and on-axis user give an even spectrum
    assert np.max(np.abs(gains - gains[::-1])) < 1e-9
    assert all(r["freq_ghz"] == 2.4 and r["distance_m"] == 1.0 for r in rows)
