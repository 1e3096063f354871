import io
import math

import numpy as np
import pytest

from wiretap_lbb.cli import main
from wiretap_lbb.config import ConfigError, PRESETS, load_config, parse_angle, parse_config
from wiretap_lbb.experiments import tau_sweep, write_csv


@pytest.mark.parametrize(
    "text,value",
    [("pi/3", math.pi / 3), ("-pi/4", -math.pi / 4), ("2*pi/3", 2 * math.pi / 3), ("0.5pi", math.pi / 2), ("1.25", 1.25), ("pi", math.pi)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


def test_parse_angle_rejects():
    with pytest.raises(ConfigError):
        parse_angle("tau/2")


def test_fig2_preset_verbatim():
    sc = load_config(preset="fig2").scenario
    assert sc.params.N_e == 2
    assert sc.params.K_ab == pytest.approx(10.0)
    assert sc.params.K_ae == pytest.approx(10 ** 0.5)
    assert sc.link.gamma_ab == pytest.approx(10.0) and sc.link.gamma_ae == pytest.approx(10.0)
    assert sc.geometry.theta_ab == pytest.approx(math.pi / 3)
    assert sc.geometry.theta_ae == pytest.approx(math.pi / 4)
    assert sc.R_s == 1.0 and not sc.jammer


def test_all_presets_parse():
    for name in PRESETS:
        cfg = load_config(preset=name)
        assert cfg.scenario.params.N_e == 2


def test_fig9_geometry():
    g = load_config(preset="fig9").scenario.geometry
    np.testing.assert_allclose(g.bob_xy, (1225, 707))
    np.testing.assert_allclose(g.eve_xy, (1000, -1000))
    np.testing.assert_allclose(g.jammer_xy, (2000, -3464))


def test_db_only_with_suffix():
    base = "[geometry]\ntheta_ab=0.1\ntheta_ae=0.2\n[channel]\nN_a=2\nN_e=1\n"
    cfg = parse_config(base + "K_ae=5\n[link]\ngamma_ab=3\ngamma_ae_db=10\n")
    assert cfg.scenario.params.K_ae == 5.0
    assert cfg.scenario.link.gamma_ab == 3.0 and cfg.scenario.link.gamma_ae == pytest.approx(10.0)
    with pytest.raises(ConfigError):
        parse_config(base + "K_ae=5\nK_ae_db=5\n")


def test_missing_key_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text("[geometry]\ntheta_ab=pi/3\ntheta_ae=pi/4\n[channel]\nN_e=2\n")
    assert main(["tau-sweep", "--config", str(path)]) == 1
    assert "N_a" in capsys.readouterr().err


def test_bad_values_exit_one(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text("[geometry]\ntheta_ab=pi/3\ntheta_ae=pi/4\n[channel]\nN_a=two\nN_e=2\n")
    assert main(["tau-sweep", "--config", str(path)]) == 1
    assert main(["tau-sweep", "--config", str(tmp_path / "nope.ini")]) == 1
    assert main(["tau-sweep", "--preset", "fig2", "--grid", "0"]) == 1


def test_config_overrides_preset(tmp_path):
    path = tmp_path / "o.ini"
    path.write_text("[experiment]\nR_s = 2\n")
    assert load_config(path, "fig2").scenario.R_s == 2.0


def test_csv_format_and_determinism(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"o{k}.csv"
        assert main(["tau-sweep", "--preset", "fig5", "--grid", "0.25", "--trials", "2000", "--seed", "3", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert b"\r" not in outs[0]
    assert outs[0].splitlines()[0] == b"N_a,tau,P_out_analytic,P_out_mc,mc_stderr"


@pytest.mark.parametrize("cmd,preset", [("outage-vs-snr", "fig3"), ("outage-vs-k", "fig4"), ("outage-vs-snr", "fig6"), ("beam-geometry", "fig8")])
def test_subcommands_run(cmd, preset, tmp_path):
    out = tmp_path / "o.csv"
    assert main([cmd, "--preset", preset, "--grid", "0.05", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) > 1 and "," in lines[0]


def test_uncertainty_sweep_runs(tmp_path):
    cfg_path = tmp_path / "u.ini"
    cfg_path.write_text("[experiment]\nn_locations = 20\n")
    out = tmp_path / "o.csv"
    assert main(["uncertainty-sweep", "--preset", "fig9", "--config", str(cfg_path), "--grid", "0.25", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "scale,sigma_x_m,sigma_y_m,rho,tau,P_out_avg,stderr"


def test_redraw_mode_averages():
    cfg = load_config(preset="fig2")
    cfg.h_ab_mode, cfg.n_channels, cfg.grid, cfg.N_a_values = "redraw", 5, 0.5, [2]
    header, rows = tau_sweep(cfg)
    assert len(rows) == 3 and all(0 <= r[2] <= 1 for r in rows)


def test_tau_sweep_fig2_minima_agree():
    cfg = load_config(preset="fig2", overrides={"n_trials": 100_000, "grid": 0.01})
    cfg.N_a_values = [2]
    _, rows = tau_sweep(cfg)
    a = np.array([r[2] for r in rows])
    m = np.array([r[3] for r in rows])
    taus = np.array([r[1] for r in rows])
    assert abs(taus[np.argmin(a)] - taus[np.argmin(m)]) <= 0.01 + 1e-12


def test_write_csv_formats():
    buf = io.StringIO()
    write_csv(buf, ["a", "b", "c"], [[1, 0.1, None], [True, 1e-20, 2.5]])
    assert buf.getvalue() == "a,b,c\n1,0.1,\n1,1e-20,2.5\n"
