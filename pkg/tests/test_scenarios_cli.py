import json

import numpy as np
import pytest

from nlskdv.cli import cli_main
from nlskdv.config import apply_overrides, build_sim_config, load_config, read_config_file
from nlskdv.errors import ConfigError
from nlskdv.scenarios import convergence_study, scenario_config, scenario_global_right, scenario_growth_left
from nlskdv.stepper import run

QUICK_T13 = ["grid.cells=512", "time.dt=1e-3"]
QUICK_T14 = ["grid.cells=512", "time.dt=1e-3"]


# ---------------------------------------------------------------------------
# config files

CONFIG_TEXT = """
[grid]
direction = left
length = 30.0
cells = 300

[coupling]
alpha = 1.0
beta = 2.0
gamma = -1.0

[initial_u]
kind = gaussian
center = -12.0
width = 1.5
wavenumber = -0.5

[time]
dt = 2e-3
t_final = 0.1
sample_stride = 5

[run]
tag = config-test
"""


def test_config_round_trip(tmp_path):
    path = tmp_path / "sim.cfg"
    path.write_text(CONFIG_TEXT)
    cfg = load_config(path)
    assert cfg.direction.value == "left"
    assert cfg.cells == 300
    assert cfg.u0.center == -12.0
    assert cfg.tag == "config-test"
    result = run(cfg)
    assert result.completed
    assert len(result.series) == 11


def test_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "sim.cfg"
    path.write_text("[grid]\nwibble = 3\n")
    with pytest.raises(ConfigError, match="wibble"):
        read_config_file(path)
    path.write_text("[gird]\nlength = 3\n")
    with pytest.raises(ConfigError, match="gird"):
        read_config_file(path)


def test_config_rejects_bad_types(tmp_path):
    path = tmp_path / "sim.cfg"
    path.write_text("[grid]\ncells = 12.5\n")
    with pytest.raises(ConfigError, match="cells"):
        read_config_file(path)


def test_overrides():
    cfg = apply_overrides({"grid": {}}, ["grid.cells=128", "time.dt=1e-2"])
    assert cfg["grid"]["cells"] == 128
    assert cfg["time"]["dt"] == 1e-2
    with pytest.raises(ConfigError):
        apply_overrides({}, ["nonsense"])
    with pytest.raises(ConfigError):
        apply_overrides({}, ["grid.bogus=1"])
    sim = build_sim_config(cfg)
    assert sim.cells == 128


# ---------------------------------------------------------------------------
# scenarios

def test_t13_quick_pass():
    verdict, result = scenario_global_right(QUICK_T13)
    assert verdict.status == "pass"
    assert verdict.hypotheses["Q0"] == pytest.approx(-2.0 * np.sqrt(np.pi / 2.0), abs=2e-2)
    assert verdict.margin is not None and verdict.margin > 0
    assert result.completed
    assert verdict.hypotheses["mass_drift"] < 1e-8


def test_t13_hypotheses_gate():
    # k = 0 with a matching-sign v0 makes Q0 > 0: hypotheses not met, not fail
    verdict, _ = scenario_global_right(
        QUICK_T13 + ["initial_u.wavenumber=0", "initial_v.kind=gaussian",
                       "initial_v.center=10.0", "initial_v.amplitude=0.5"])
    assert verdict.status == "hypotheses-not-met"
    assert verdict.passed is None
    assert verdict.hypotheses["Q0"] > 0


def test_t14a_quick_pass():
    verdict, result = scenario_growth_left("a", QUICK_T14)
    assert verdict.status == "pass"
    assert verdict.hypotheses["Q0"] == pytest.approx(2.0 * np.sqrt(np.pi / 2.0), abs=2e-2)
    assert result.grid.direction.value == "left"


def test_t14_zero_data_gate():
    verdict, _ = scenario_growth_left("a", QUICK_T14 + ["initial_u.kind=zero"])
    assert verdict.status == "hypotheses-not-met"
    assert verdict.hypotheses["Q0"] == 0.0


def test_t14b_gate_report_quick():
    # a datum passing the sign gate but run only briefly: the hypothesis
    # values must be reported either way
    verdict, _ = scenario_growth_left(
        "b", ["grid.cells=1024", "grid.length=60.0", "time.dt=2e-3", "time.t_final=0.5"])
    assert "Q0_minus_8E0" in verdict.hypotheses
    assert "beta_excess" in verdict.hypotheses
    assert verdict.hypotheses["Q0_minus_8E0"] > 0
    assert verdict.hypotheses["beta_excess"] >= 0
    assert verdict.status in ("pass", "fail")  # gates hold on the default datum


def test_scenario_rejects_nonhomogeneous():
    with pytest.raises(ConfigError, match="homogeneous"):
        scenario_global_right(QUICK_T13 + ["boundary_f.kind=poly_exp"])


def test_scenario_unknown_tag():
    with pytest.raises(ConfigError):
        scenario_config("t99")


# ---------------------------------------------------------------------------
# convergence study

def test_convergence_study_preconditions():
    with pytest.raises(ConfigError):
        convergence_study([(256, 8e-3)])
    with pytest.raises(ConfigError):
        convergence_study([(256, 8e-3), (512, 8e-3), (1024, 2e-3)])


def test_convergence_study_zero_profile():
    rep = convergence_study([(256, 8e-3), (512, 4e-3), (1024, 2e-3)], profile="zero")
    assert rep["errors"] == [0.0, 0.0, 0.0]
    assert rep["fitted_order"] is None


# ---------------------------------------------------------------------------
# CLI

def test_cli_airy(capsys):
    assert cli_main(["airy", "0"]) == 0
    assert capsys.readouterr().out.strip() == "0.3550280539"
    assert cli_main(["airy", "-60"]) == 1


def test_cli_usage_errors(capsys):
    assert cli_main(["bogus-subcommand"]) == 1
    assert cli_main([]) == 1
    assert cli_main(["scenario", "t99"]) == 1


def test_cli_run_and_outputs(tmp_path, capsys):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text(CONFIG_TEXT)
    out = tmp_path / "out"
    code = cli_main(["run", str(cfg), "--outdir", str(out)])
    assert code == 0
    assert (out / "series.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["completed"] is True
    assert summary["config"]["tag"] == "config-test"


def test_cli_run_missing_config(tmp_path):
    assert cli_main(["run", str(tmp_path / "absent.cfg")]) == 1


def test_cli_scenario_verdict_files(tmp_path):
    out = tmp_path / "t13"
    code = cli_main(["scenario", "t13", "--outdir", str(out),
                     "--override", "grid.cells=512", "--override", "time.dt=1e-3"])
    assert code == 0
    verdict = json.loads((out / "verdict.json").read_text())
    assert verdict["status"] == "pass"
    assert (out / "series.csv").exists()
    assert (out / "summary.json").exists()


def test_cli_scenario_hypotheses_exit_code(tmp_path):
    code = cli_main(["scenario", "t14a", "--outdir", str(tmp_path),
                     "--override", "grid.cells=512", "--override", "time.dt=1e-3",
                     "--override", "initial_u.kind=zero"])
    assert code == 3


def test_cli_halt_exit_code(tmp_path):
    cfg = tmp_path / "blow.cfg"
    cfg.write_text(
        "[grid]\ndirection = left\nlength = 20.0\ncells = 256\n"
        "[coupling]\nalpha = 1.0\nbeta = 0.0\ngamma = -1.0\n"
        "[initial_v]\nkind = gaussian\namplitude = 40.0\ncenter = -10.0\nwidth = 0.25\n"
        "[time]\ndt = 0.05\nt_final = 2.0\nsample_stride = 1\n")
    assert cli_main(["run", str(cfg), "--outdir", str(tmp_path / "o")]) == 4


def test_cli_determinism_byte_identical_csv(tmp_path):
    args = ["scenario", "t14a", "--override", "grid.cells=256",
            "--override", "time.dt=2e-3", "--override", "time.t_final=0.1"]
    cli_main(args + ["--outdir", str(tmp_path / "a")])
    cli_main(args + ["--outdir", str(tmp_path / "b")])
    a = (tmp_path / "a" / "series.csv").read_bytes()
    b = (tmp_path / "b" / "series.csv").read_bytes()
    assert a == b
    va = (tmp_path / "a" / "verdict.json").read_bytes()
    vb = (tmp_path / "b" / "verdict.json").read_bytes()
    assert va == vb
