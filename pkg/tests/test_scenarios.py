import csv
import json

import numpy as np
import pytest

from cavitherm import cli
from cavitherm.errors import ValidationError
from cavitherm.scenarios import (PRESETS, load_preset, load_scenario, parse_angular, run,
                                 scenario_from_dict, sweep, with_override)

from conftest import KAPPA, OMEGA_C, STRONG, WEAK, WIDTH, preset_run

SHORT = {"grid": {"horizon_ns": 40.0}}


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_fig2_preset_parameters():
    sc = load_preset("fig2")
    p = sc.physical
    assert p.omega_c == pytest.approx(OMEGA_C, rel=1e-15)
    assert p.Omega == pytest.approx(STRONG) and p.kappa == pytest.approx(KAPPA)
    assert p.d == pytest.approx(WIDTH) and p.T0 == 0.1 and p.q == 1.39
    assert p.omega_s == p.omega_c and sc.z0 == 10 and not sc.drive.active


def test_fig5_is_detuned_weak():
    p = load_preset("fig5").physical
    assert p.Omega == pytest.approx(WEAK) and p.omega_s_ratio == 0.998


def test_driven_presets():
    for name in ("fig6", "fig7", "fig8", "fig9"):
        sc = load_preset(name)
        assert sc.z0 == 0 and sc.drive.f_m == 0.1 and sc.drive.t_s == 900.0
        assert sc.horizon == 1200.0
    assert load_preset("fig8").drive.omega_d == "omega_r_steady"
    assert load_preset("fig9").physical.omega_s_ratio == 1.0


@pytest.mark.parametrize("text,value", [("17.2pi", 17.2 * np.pi), ("pi", np.pi),
                                        ("2*pi", 2 * np.pi), (" 0.5 π", 0.5 * np.pi),
                                        (3, 3.0), ("1e-3", 1e-3)])
def test_angular_strings(text, value):
    assert parse_angular(text, "x") == pytest.approx(value)


def test_bad_q_names_interval():
    with pytest.raises(ValidationError, match=r"physical\.q.*\(1, 2\)"):
        scenario_from_dict({"preset": "fig2", "physical": {"q": 2.5}})


def test_unit_mistake_caught_by_range():
    # Omega given in GHz-sized units would exceed a tenth of the cavity frequency
    with pytest.raises(ValidationError, match="physical.Omega_MHz"):
        scenario_from_dict({"preset": "fig2", "physical": {"Omega_MHz": 17200}})
    with pytest.raises(ValidationError, match="physical.omega_c_GHz"):
        scenario_from_dict({"preset": "fig2", "physical": {"omega_c_GHz": 16901.8}})


def test_unknown_field_path_reported():
    with pytest.raises(ValidationError, match=r"drive: unknown field\(s\) \['t_off'\]"):
        scenario_from_dict({"preset": "fig6", "drive": {"t_off": 3}})


def test_switch_off_after_horizon_rejected():
    with pytest.raises(ValidationError, match="drive.t_s_ns"):
        scenario_from_dict({"preset": "fig6", "grid": {"horizon_ns": 500}})


def test_switch_off_off_grid_rejected():
    with pytest.raises(ValidationError, match="drive.t_s_ns"):
        scenario_from_dict({"preset": "fig6", "drive": {"t_s_ns": 900.1}})


def test_load_from_file_with_named_scenarios(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"scenarios": {"a": {"preset": "fig3"}, "b": {"preset": "fig4"}}}))
    assert load_scenario(p, "b").physical.omega_s_ratio == 0.998
    with pytest.raises(ValidationError):
        load_scenario(p)
    p.write_text("{not json")
    with pytest.raises(ValidationError, match="invalid JSON"):
        load_scenario(p)


def test_file_overrides_preset(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"physical": {"T0_K": 0.05}}))
    sc = load_scenario(p, "fig2")
    assert sc.physical.T0 == 0.05 and sc.physical.Omega == pytest.approx(STRONG)


def test_run_writes_traces_and_manifest(tmp_path):
    sc = scenario_from_dict({"preset": "fig6", "grid": {"horizon_ns": 20.0},
                             "drive": {"t_s_ns": 10.0},
                             "outputs": {"traces": ["greens", "thermo", "fields", "kernels"]}})
    res = run(sc, tmp_path / "out")
    files = sorted(p.name for p in (tmp_path / "out").iterdir())
    assert files == ["fields.csv", "greens.csv", "kernels.csv", "manifest.json", "thermo.csv"]
    man = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert man["physical"]["Omega"] == pytest.approx(STRONG)
    assert man["drive"]["amplitude"] == pytest.approx(OMEGA_C / 10)
    assert man["grid"]["n_steps"] == 81
    assert man["diagnostics"]["balance_relative_residual"] == pytest.approx(
        res.thermo.relative_residual())
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".staging")]


def test_manifest_reproduces_run(tmp_path):
    sc = scenario_from_dict({"preset": "fig4", **SHORT})
    run(sc, tmp_path / "a")
    man = json.loads((tmp_path / "a" / "manifest.json").read_text())
    run(scenario_from_dict(man["document"], man["name"]), tmp_path / "b")
    for f in ("greens.csv", "thermo.csv", "coefficients.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_failed_run_leaves_no_output(tmp_path):
    from cavitherm.errors import ConvergenceError
    sc = scenario_from_dict({"preset": "fig2", **SHORT, "tolerances": {"step_halving": 1e-14}})
    with pytest.raises(ConvergenceError, match=r"\[greens_solver\]"):
        run(sc, tmp_path / "out")
    assert list(tmp_path.iterdir()) == []


def test_steady_frequency_two_pass():
    res8 = preset_run("fig8")
    wd = res8.manifest["diagnostics"]["omega_r_steady"]
    c = res8.coefficients
    tail = res8.solution.grid.times >= 0.8 * 1200
    assert wd == pytest.approx(np.mean(c.omega_r[tail]), rel=1e-14)
    assert res8.solution.drive.drive_freq == wd
    assert wd > OMEGA_C  # spins below the cavity push its frequency up


def test_weak_coupling_draws_more_drive_power():
    strong, weak = preset_run("fig6").thermo, preset_run("fig7").thermo
    t = preset_run("fig6").solution.grid.times
    window = (t > 700) & (t < 890)
    assert np.abs(weak.P_w_d[window]).mean() > np.abs(strong.P_w_d[window]).mean()


def test_resonant_drive_phase_relation():
    res = preset_run("fig9")
    y, fr = res.solution.y, res.coefficients.f_r_rot
    assert np.abs(y.real).max() < 1e-6 * np.abs(y.imag).max()
    assert np.nanmax(np.abs(fr.imag)) < 1e-6 * np.nanmax(np.abs(fr.real))


def test_override_and_sweep_validation():
    base = load_preset("fig2")
    assert with_override(base, "Omega", "1.72pi").physical.Omega == pytest.approx(WEAK)
    with pytest.raises(ValidationError, match="tone drive"):
        with_override(base, "f_m", 0.2)
    with pytest.raises(ValidationError, match="empty"):
        sweep(base, "T0", [], "unused")
    with pytest.raises(ValidationError, match="cannot sweep"):
        sweep(base, "q", [1.2], "unused")


def test_temperature_sweep(tmp_path):
    base = scenario_from_dict({"preset": "fig2", **SHORT})
    index = sweep(base, "T0", [0.0, 0.1], tmp_path)
    assert [p["status"] for p in index["points"]] == ["ok", "ok"]
    on_disk = json.loads((tmp_path / "index.json").read_text())
    assert on_disk["points"][0]["dir"] == index["points"][0]["dir"]
    head, rows = read_csv(tmp_path / index["points"][0]["dir"] / "thermo.csv")
    col = head.index("I_h_F")
    assert all(float(r[col]) == 0.0 for r in rows[1:])
    _, rows = read_csv(tmp_path / index["points"][1]["dir"] / "thermo.csv")
    assert any(float(r[col]) != 0.0 for r in rows[1:])


def test_sweep_records_point_failures(tmp_path):
    base = scenario_from_dict({"preset": "fig2", **SHORT, "tolerances": {"step_halving": 1e-14}})
    index = sweep(base, "Omega", ["1.72pi", "17.2pi"], tmp_path)
    assert [p["status"] for p in index["points"]] == ["failed", "failed"]
    assert index["points"][0]["error_kind"] == "numerical"


def test_coupling_sweep_shows_regime_change(tmp_path):
    base = scenario_from_dict({"preset": "fig2", "grid": {"horizon_ns": 300.0}})
    index = sweep(base, "Omega", ["1.72pi", "17.2pi"], tmp_path)
    flips = []
    for p in index["points"]:
        head, rows = read_csv(tmp_path / p["dir"] / "coefficients.csv")
        g = np.array([float(r[head.index("gamma")]) for r in rows])
        g = g[np.isfinite(g)]
        flips.append(int(np.sum(np.sign(g[1:]) != np.sign(g[:-1]))))
    assert flips[0] == 0 and flips[1] >= 3


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["-q", "simulate", "--preset", "fig3", "--out", str(tmp_path / "ok")]) == 0
    assert (tmp_path / "ok" / "thermo.csv").exists()
    assert cli.main(["-q", "simulate", "--preset", "nope", "--out", str(tmp_path / "x")]) == 2
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"preset": "fig2", **SHORT, "tolerances": {"step_halving": 1e-14}}))
    assert cli.main(["-q", "simulate", "--config", str(cfg), "--out", str(tmp_path / "y")]) == 3
    with pytest.raises(SystemExit) as exc:
        cli.main(["simulate"])
    assert exc.value.code == 2


def test_cli_sweep_and_oracle(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"preset": "fig3", **SHORT}))
    assert cli.main(["-q", "sweep", "--config", str(cfg), "--param", "T0", "--values", "0,0.1",
                     "--out", str(tmp_path / "sw")]) == 0
    assert len(json.loads((tmp_path / "sw" / "index.json").read_text())["points"]) == 2
    assert cli.main(["-q", "oracle", "--preset", "fig2", "--modes", "64", "--dt", "0.1",
                     "--horizon", "100", "--out", str(tmp_path / "or")]) == 0
    rep = json.loads((tmp_path / "or" / "oracle_report.json").read_text())
    assert rep["M"] == 64 and rep["u_deviation"] < 1e-4 and rep["compared_until"] == 100


def test_all_presets_validate():
    for name in PRESETS:
        assert load_preset(name).name == name
