import csv
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from kickedtomo.cli import main
from kickedtomo.scenario import ConfigError, Scenario, load_scenario, parse_scenario
from kickedtomo.trajectory import OscillatorParams
from kickedtomo.verify import default_scenarios, verify_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

UNDAMPED_KICK = """
[params]
omega0 = 1
gamma = 0
kappa = 1

[time]
t_end = 3.14159
n_points = 4001
"""


def write(tmp_path, text, name="sc.ini"):
    f = tmp_path / name
    f.write_text(text)
    return f


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    columns = header[1][2:].split(",")
    rows = [[float(v) if v else math.nan for v in r] for r in csv.reader(body)]
    return header, columns, np.array(rows)


def test_parse_full_example():
    sc = load_scenario(SCENARIOS / "weak.conf")
    assert sc.name == "weak"
    assert sc.params == OscillatorParams(1.0, 0.2, 1.0, (0.0,))
    assert sc.alpha == 1 + 0.5j
    assert sc.time_grid[0] == -2 and sc.time_grid.size == 241
    assert [(f.mu, f.nu) for f in sc.frames] == [(1, 0), (0, 1), (1, 1), (2, -0.5)]
    assert sc.x_grid.size == 161
    assert sc.tomogram_t == 1.5
    assert len(sc.digest) == 16


def test_flat_and_sectioned_forms_agree():
    flat = parse_scenario("name = a\nparams.omega0 = 1\nparams.gamma = 0.3\nparams.kappa = -1\ntime.t_end = 4\n")
    ini = parse_scenario("[scenario]\nname = a\n[params]\nomega0 = 1\ngamma = 0.3\nkappa = -1\n[time]\nt_end = 4\n")
    assert flat == ini


def test_defaults():
    sc = parse_scenario("[params]\nomega0 = 1\ngamma = 0.1\n", name="x")
    assert sc.name == "x"
    assert sc.params.kappa == 0 and sc.params.kick_times == (0.0,)
    assert sc.alpha == 0 and sc.n_time == 201 and sc.period == 1
    assert len(sc.frames) == 2


def test_digest_ignores_layout_but_not_values():
    a = parse_scenario("[params]\nomega0 = 1\ngamma = 0.1\n")
    b = parse_scenario("# comment\n[params]\ngamma=0.1\n\nomega0 =  1\n")
    c = parse_scenario("[params]\nomega0 = 1\ngamma = 0.2\n")
    assert a.digest == b.digest != c.digest


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("[params]\nomega0 = 1\n", "required"),
        ("[params]\nomega0 = 1\ngamma = 0\nspeed = 3\n", "unknown key"),
        ("[physics]\nomega0 = 1\n", "unknown section"),
        ("[params]\nomega0 = 1\nomega0 = 2\ngamma = 0\n", "omega0"),
        ("omega0 = 1\n", "unknown key"),
        ("[params]\nomega0 = 1\ngamma = 0\nparams.kappa = 1\n", "unknown key"),
        ("params.omega0 = 1\nparams.gamma = 0\n[params]\ngamma = 1\n", "twice"),
        ("[params]\nomega0 = one\ngamma = 0\n", "one"),
        ("[params]\nomega0 = -1\ngamma = 0\n", ">= 0"),
        ("[params]\nomega0 = 1\ngamma = 0\nkick_times = 2, 1\n", "increasing"),
        ("[params]\nomega0 = 1\ngamma = 0\n[time]\nt_end = -1\n", "degenerate"),
        ("[params]\nomega0 = 1\ngamma = 0\n[time]\nn_points = 0\n", "n_points"),
        ("[params]\nomega0 = 1\ngamma = 0\n[xgrid]\nx_min = 2\nx_max = 1\n", "degenerate"),
        ("[params]\nomega0 = 1\ngamma = 0\n[frames]\nmu = 1, 0\nnu = 1\n", "same length"),
        ("[params]\nomega0 = 1\ngamma = 0\n[frames]\ntheta = 0\nmu = 1\nnu = 0\n", "either"),
        ("[params]\nomega0 = 1\ngamma = 0\n[frames]\nmu = 0\nnu = 0\n", "degenerate"),
        ("[params]\nomega0 = 1\ngamma = 0\n[scenario]\noutputs = plots\n", "unknown outputs"),
    ],
)
def test_config_errors(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_scenario(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / "nope.ini")
    assert main(["trajectory", "--config", str(tmp_path / "nope.ini")]) == 1


def test_critical_damping_exit_1(tmp_path, capsys):
    f = write(tmp_path, "[params]\nomega0 = 1\ngamma = 1\n")
    for cmd in ("trajectory", "verify"):
        assert main([cmd, "--config", str(f)]) == 1
    assert "critical" in capsys.readouterr().err.lower()


def test_usage_errors(capsys):
    assert main(["bogus"]) == 1
    assert main(["moments"]) == 1
    assert main(["--help"]) == 0


def test_verify_undamped_unkicked(tmp_path, capsys):
    f = write(tmp_path, "[params]\nomega0 = 1\ngamma = 0\nkappa = 0\n")
    assert main(["verify", "--config", str(f), "--out", str(tmp_path / "o")]) == 0
    report = (tmp_path / "o" / "verify.txt").read_text()
    assert "FAIL" not in report and "checks passed" in report


def test_verify_failure_exit_2(tmp_path, monkeypatch):
    import kickedtomo.cli as cli
    from kickedtomo.verify import Check

    monkeypatch.setattr(cli, "verify_scenario", lambda sc: [Check(sc.name, "forced", 1.0, 0.0)])
    f = write(tmp_path, "[params]\nomega0 = 1\ngamma = 0\n")
    assert main(["verify", "--config", str(f)]) == 2


def test_default_matrix_all_pass():
    for sc in default_scenarios():
        failed = [c for c in verify_scenario(sc) if not c.passed]
        assert not failed, failed


def test_trajectory_csv(tmp_path):
    f = write(tmp_path, UNDAMPED_KICK)
    assert main(["trajectory", "--config", str(f), "--out", str(tmp_path)]) == 0
    header, cols, data = read_csv(tmp_path / "trajectory.csv")
    assert header[0].startswith("# kickedtomo trajectory scenario=sc sha256=")
    assert cols == ["t", "re_eps", "im_eps", "re_eps_dot", "im_eps_dot", "wronskian_defect"]
    assert data.shape == (4001, 6)
    assert np.max(data[:, 5]) < 1e-12


def test_moments_csv(tmp_path):
    f = write(tmp_path, UNDAMPED_KICK + "[scenario]\nalpha = 1j\n")
    assert main(["moments", "--config", str(f), "--out", str(tmp_path)]) == 0
    _, cols, data = read_csv(tmp_path / "moments.csv")
    assert cols == ["t", "sigma_qq", "sigma_pp", "sigma_qp", "mean_q", "mean_p", "uncertainty_defect"]
    assert data[0, 1] == 0.5
    assert np.max(np.abs(data[:, 6])) < 1e-12


def test_squeezing_minimum(tmp_path):
    f = write(tmp_path, UNDAMPED_KICK)
    assert main(["squeezing", "--config", str(f), "--out", str(tmp_path)]) == 0
    _, cols, data = read_csv(tmp_path / "squeezing.csv")
    assert cols == ["t", "k2", "k2_closed", "k2_lower_limit_n1"]
    assert np.min(data[:, 1]) == pytest.approx(3 - 2 * math.sqrt(2), abs=1e-6)
    assert np.allclose(data[:, 1], data[:, 2], atol=1e-12)
    assert np.all(data[:, 3] == pytest.approx(3 - 2 * math.sqrt(2)))


@pytest.mark.parametrize("name, extra", [("strong.ini", False), ("free.ini", False), ("two_kicks.conf", True)])
def test_squeezing_other_regimes(tmp_path, name, extra):
    assert main(["squeezing", "--config", str(SCENARIOS / name), "--out", str(tmp_path)]) == 0
    _, cols, data = read_csv(tmp_path / "squeezing.csv")
    assert cols == ["t", "k2", "k2_closed"]
    if extra:  # no closed form with a second kick
        assert np.all(np.isnan(data[:, 2]))
    else:
        assert np.allclose(data[:, 1], data[:, 2], rtol=1e-12, atol=1e-12)


def test_tomogram_coherent_normalisation(tmp_path):
    assert main(["tomogram", "--config", str(SCENARIOS / "coherent.ini"), "--out", str(tmp_path)]) == 0
    _, cols, data = read_csv(tmp_path / "tomogram.csv")
    assert cols[:5] == ["mu", "nu", "mean", "variance", "norm_defect"]
    assert data.shape == (7, 5 + 241)
    assert np.all(data[:, 4] < 1e-6)
    assert np.allclose(data[:, 3], 0.5)


def test_output_is_deterministic(tmp_path, capsys):
    f = SCENARIOS / "weak.conf"
    assert main(["moments", "--config", str(f)]) == 0
    first = capsys.readouterr().out
    assert main(["moments", "--config", str(f)]) == 0
    assert capsys.readouterr().out == first
    assert main(["moments", "--config", str(f), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "moments.csv").read_text() == first


def test_run_emits_selected_outputs(tmp_path):
    f = write(tmp_path, "[scenario]\noutputs = trajectory, verify\n[params]\nomega0 = 1\ngamma = 0.2\nkappa = 1\n")
    out = tmp_path / "o"
    assert main(["run", "--config", str(f), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["trajectory.csv", "verify.txt"]


def test_run_needs_out_for_several(tmp_path):
    f = write(tmp_path, "[params]\nomega0 = 1\ngamma = 0.2\n")
    assert main(["run", "--config", str(f)]) == 1


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "kickedtomo", "verify"], capture_output=True, text=True, timeout=120
    )
    assert r.returncode == 0, r.stdout + r.stderr
    assert "checks passed" in r.stdout


def test_scenario_rejects_bad_grid_directly():
    with pytest.raises(ConfigError):
        Scenario(OscillatorParams(1, 0), n_time=0)
