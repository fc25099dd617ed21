import json

import pytest

from coneineq import cli


BASE_CONFIG = {
    "n": 2,
    "p": 2.0,
    "gamma": 0.8,
    "cone": {"orthant_mask": [True, True]},
    "weights": [{"kind": "monomial", "exponents": [1.0, 1.0]}],
    "suite": "gn",
    "resolution": 32,
    "samples": 500,
    "seed": 0,
}


@pytest.fixture()
def config_path(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(BASE_CONFIG))
    return str(path)


def test_constants_report(config_path, tmp_path, capsys):
    out = tmp_path / "constants.json"
    code = cli.main(["constants", config_path, "--no-timestamp",
                     "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["schema_version"] == 1
    assert report["bundle"]["theta"] == pytest.approx(0.6, rel=1e-12)
    assert report["ball_mass"] == pytest.approx(0.125, abs=1e-12)
    assert "generated_at" not in report


def test_gamma_one_reports_log_sobolev_constant(config_path, tmp_path):
    out = tmp_path / "ls.json"
    code = cli.main(["constants", config_path, "--gamma", "1.0",
                     "--no-timestamp", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert "log_sobolev_constant" in report
    assert "bundle" not in report


def test_verify_pass_and_determinism(config_path, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["verify", config_path, "--no-timestamp",
                     "--out", str(out1)]) == 0
    assert cli.main(["verify", config_path, "--no-timestamp",
                     "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["all_pass"]


def test_check_condition_failure_exit_code(tmp_path):
    bad = dict(BASE_CONFIG)
    bad["C0"] = 1.0
    bad["K"] = -5.0  # one below the admissible equal-weight K
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code = cli.main(["check-condition", str(path), "--no-timestamp",
                     "--out", str(tmp_path / "r.json")])
    assert code == 1


def test_check_condition_pass(config_path, tmp_path):
    code = cli.main(["check-condition", config_path, "--no-timestamp",
                     "--out", str(tmp_path / "r.json")])
    assert code == 0


def test_unknown_config_key_is_rejected(tmp_path, capsys):
    cfg = dict(BASE_CONFIG)
    cfg["not_a_key"] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    assert cli.main(["constants", str(path)]) == 2
    assert "unknown config keys" in capsys.readouterr().err


def test_missing_required_key(tmp_path):
    cfg = {k: v for k, v in BASE_CONFIG.items() if k != "weights"}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    assert cli.main(["constants", str(path)]) == 2


def test_flag_overrides_config(config_path, tmp_path):
    out = tmp_path / "g9.json"
    code = cli.main(["constants", config_path, "--gamma", "0.9",
                     "--no-timestamp", "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["gamma"] == 0.9


def test_integrals_subcommand(config_path, tmp_path):
    out = tmp_path / "ints.json"
    code = cli.main(["integrals", config_path, "--no-timestamp",
                     "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["pass"]
    assert report["max_rel_error"] <= 1e-6


def test_sweep_csv(config_path, tmp_path):
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", config_path, "--no-timestamp",
                     "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("config_hash,family,gamma,lam")
    assert len(lines) > 1
