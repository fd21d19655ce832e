"""CLI behavior: config resolution, exit codes, output files, determinism."""

import json

import pytest

from fockqha.cli import main, parse_config_file, resolve_config, build_parser, ConfigError


def run_cli(args):
    return main(args)


def test_parse_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nmodel.D = 10\n\nconv.m=32\n")
    assert parse_config_file(path) == {"model.D": "10", "conv.m": "32"}


def test_parse_config_rejects_garbage(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("model.D 10\n")
    with pytest.raises(ConfigError, match="key=value"):
        parse_config_file(path)


def test_resolve_config_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("model.D=10\nmodel.Q=14\n")
    args = build_parser().parse_args(["--config", str(path), "--D", "12", "verify"])
    cfg = resolve_config(args)
    assert cfg["model.D"] == 12  # flag overrides file
    assert cfg["model.Q"] == 14  # file overrides default


def test_unknown_config_key_is_rejected(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("model.bogus=1\n")
    args = build_parser().parse_args(["--config", str(path), "verify"])
    with pytest.raises(ConfigError, match="unknown"):
        resolve_config(args)


def test_print_config(capsys):
    assert run_cli(["--print-config", "--D", "18"]) == 0
    out = capsys.readouterr().out
    assert "model.D=18" in out
    assert "model.Q=20" in out


def test_verify_passes_on_default_model(tmp_path, capsys):
    code = run_cli(["--D", "16", "--Q", "20", "--outdir", str(tmp_path), "verify"])
    assert code == 0
    doc = json.loads((tmp_path / "verify_report.json").read_text())
    assert doc["passed"] is True
    assert doc["schema"] == "1"
    assert doc["config"]["model.D"] == 16  # resolved config embedded


def test_verify_rejects_invalid_model(capsys):
    assert run_cli(["--D", "12", "--Q", "4", "verify"]) == 2


def test_verify_flags_tiny_window(tmp_path):
    code = run_cli(
        ["--D", "16", "--Q", "20", "--window", "1.0", "--m", "24", "--outdir", str(tmp_path), "verify"]
    )
    doc = json.loads((tmp_path / "verify_report.json").read_text())
    assert code == 1
    assert any("window" in f for f in doc["flags"])


def test_malformed_approx_target(capsys):
    assert run_cli(["--D", "10", "--Q", "14", "approx", "bogus:1"]) == 2


def test_unknown_sweep_kind(capsys):
    assert run_cli(["--D", "10", "--Q", "14", "sweep", "nonsense"]) == 2


def test_missing_subcommand(capsys):
    assert run_cli(["--D", "10"]) == 2


def test_export_operator_and_berezin(tmp_path, capsys):
    assert run_cli(["--D", "8", "--Q", "12", "--outdir", str(tmp_path), "export-operator", "weyl:0.2"]) == 0
    doc = json.loads((tmp_path / "operator.json").read_text())
    assert doc["kind"] == "fock-operator"
    assert run_cli(
        ["--D", "8", "--Q", "12", "--outdir", str(tmp_path), "export-berezin", "rank-one:0", "--grid-m", "11"]
    ) == 0
    assert (tmp_path / "berezin.csv").exists()


def test_compactness_sweep_writes_files(tmp_path, capsys):
    code = run_cli(
        ["--D", "10", "--Q", "14", "--outdir", str(tmp_path), "sweep", "compactness", "--symbol", "rank-one:0"]
    )
    assert code == 0
    assert (tmp_path / "sweep_compactness.csv").exists()
    doc = json.loads((tmp_path / "sweep_compactness.json").read_text())
    assert doc["kind"] == "compactness"


def test_outputs_are_deterministic(tmp_path, capsys):
    # same outdir both times: the embedded resolved config must match too
    base = ["--D", "16", "--Q", "20", "--seed", "3", "--outdir", str(tmp_path)]
    assert run_cli(base + ["--threads", "1", "verify"]) == 0
    a = (tmp_path / "verify_report.json").read_bytes()
    assert run_cli(base + ["--threads", "4", "verify"]) == 0
    b = (tmp_path / "verify_report.json").read_bytes()
    # the thread cap is not part of the resolved config and must not
    # change a single output byte
    assert a == b
