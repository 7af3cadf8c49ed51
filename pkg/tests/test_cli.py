import csv
import json
import math
import subprocess
import sys

import pytest

from mimo_lsa.cli import SUITE_DEFAULTS, main, parse_config, parse_grid
from mimo_lsa.errors import ConfigError

FAST = {
    "asymptotic": [],
    "montecarlo": ["--trials", "4", "--K", "5", "--export-channel"],
    "cdf": ["--trials", "4", "--K", "5", "--alpha0-M", "60"],
    "convergence": ["--trials", "3", "--M-grid", "50,100"],
    "quadform": ["--trials", "3", "--M", "50,60"],
    "lms": ["--trials", "2", "--K", "4", "--M", "16", "--T-train", "300"],
}

HEADERS = {
    "asymptotic.csv": "alpha,kappa,sinr_db,sinr_linear,label",
    "montecarlo.csv": "trial,receiver,kappa,M,K,sinr_db",
    "cdf_alpha0.csv": "trial,receiver,kappa,M,K,sinr_db",
    "cdf_loaded.csv": "trial,receiver,kappa,M,K,sinr_db",
    "cdf_quantiles.csv": "situation,q,sinr_db",
    "convergence.csv": "M,K,mean_sinr_db,std_sinr_db,asymptote_db,abs_gap_db",
    "quadform.csv": "trial,M,K,B,term_id,empirical,limit,scale,residual",
    "quadform_summary.csv": "M,term_id,n,mean_empirical,std_err,limit,median_residual",
    "lms.csv": "trial,receiver,kappa,M,K,sinr_db",
    "lms_curve.csv": "t,squared_error,sinr_db_every_100_steps",
    "drop.csv": "cell_index,user_index,x_km,y_km",
    "channel_trial0.csv": "col_index,antenna_index,re,im",
}


def _run(tmp_path, sub, extra=(), name="out"):
    out = tmp_path / name
    code = main([sub, "--out", str(out), "--workers", "1", *FAST[sub], *extra])
    return code, out


def test_k_resolved_from_alpha():
    cfg = parse_config({"B": 7, "M": 50, "alpha": 1.0, "rho_r_db": 20, "kappa": 1})
    assert cfg.system.K == 50
    assert cfg.system.rho_r == pytest.approx(100.0)


def test_inconsistent_alpha_rejected():
    with pytest.raises(ConfigError, match="inconsistent"):
        parse_config({"alpha": 0.5, "K": 30, "M": 50})


def test_bad_kappa_rejected():
    with pytest.raises(ConfigError, match="kappa must be 0 or 1") as exc:
        parse_config({"kappa": 2})
    assert exc.value.field == "kappa"


def test_coherence_budget_rejected():
    with pytest.raises(ConfigError, match="K=60 exceeds N_c\\*T=50"):
        parse_config({"M": 60, "K": 60, "coherence": {"T_c": 20, "N_c": 10, "T": 5}})


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config({"antennas": 4})


def test_cost231_snr_derived_from_budget():
    cfg = parse_config({"scenario": "cost231", "K": 5})
    assert cfg.system.rho_r_db == pytest.approx(197.0)
    with pytest.raises(ConfigError):
        parse_config({"scenario": "cost231", "rho_r_db": 20})


def test_grid_parsing():
    g = parse_grid("0:1:0.02")
    assert len(g) == 51 and g[0] == 0.0 and g[-1] == 1.0
    assert list(parse_grid("0.1,0.5")) == [0.1, 0.5]


def test_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["asymptotic", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "malformed JSON" in capsys.readouterr().err


def test_invalid_config_exit_code_names_field(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kappa": 2}))
    assert main(["asymptotic", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "[kappa]" in capsys.readouterr().err


def test_unknown_subcommand_exits_2(capsys):
    assert main(["plot"]) == 2
    assert "usage" in capsys.readouterr().err


def test_runtime_failure_exits_1(tmp_path, capsys):
    code, _ = _run(tmp_path, "lms", ["--mu0", "50"])
    assert code == 1
    assert "mu0" in capsys.readouterr().err


@pytest.mark.parametrize("sub", sorted(FAST))
def test_every_subcommand_runs(tmp_path, sub):
    code, out = _run(tmp_path, sub)
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["subcommand"] == sub
    for key in ("config_echo", "tool_version", "kernel_backend", "master_seed", "started_at",
                "finished_at", "output_files", "results"):
        assert key in manifest
    assert set(SUITE_DEFAULTS[sub]) <= set(manifest["config_echo"]["suite"])
    for name in manifest["output_files"]:
        lines = (out / name).read_text().splitlines()
        assert lines[0] == HEADERS[name]
        assert len(lines) > 1
        assert not any(";" in line for line in lines)


def test_asymptotic_csv_content(tmp_path):
    code, out = _run(tmp_path, "asymptotic", ["--alpha-grid", "0:1:0.5", "--kappa", "both",
                                              "--rho-r-db", "20"])
    assert code == 0
    with open(out / "asymptotic.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6
    full = [r for r in rows if r["kappa"] == "1" and float(r["alpha"]) == 1.0][0]
    assert float(full["sinr_linear"]) == pytest.approx(100 / 5507, rel=1e-12)
    assert full["sinr_db"] == f"{10 * math.log10(100 / 5507):.6f}"


def test_cost231_montecarlo_exports_drop(tmp_path):
    code, out = _run(tmp_path, "montecarlo", ["--scenario", "cost231"])
    assert code == 0
    rows = (out / "drop.csv").read_text().splitlines()
    assert len(rows) == 1 + 7 * 5


@pytest.mark.parametrize("sub", ["montecarlo", "quadform", "lms", "cdf"])
def test_manifest_echo_reproduces_outputs(tmp_path, sub):
    extra = ["--scenario", "cost231"] if sub in ("montecarlo", "cdf") else []
    code, first = _run(tmp_path, sub, extra, "first")
    assert code == 0
    manifest = json.loads((first / "manifest.json").read_text())
    cfg_path = tmp_path / "echo.json"
    cfg_path.write_text(json.dumps(manifest["config_echo"]))
    second = tmp_path / "second"
    assert main([sub, "--config", str(cfg_path), "--out", str(second), "--workers", "2"]) == 0
    for name in manifest["output_files"]:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mimo_lsa.cli", "asymptotic", "--out",
                           str(tmp_path), "--alpha-grid", "0,1"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "asymptotic.csv").exists()
