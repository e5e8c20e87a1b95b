"""CLI: config handling, outputs, hashes, exit codes."""

import json

import pytest

from slabdecay.cli import EXIT_OK, EXIT_USAGE, load_config, main
from slabdecay.errors import ParameterError


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_load_config_defaults_and_merge(tmp_path):
    cfg = load_config(None)
    assert cfg["symbol"]["family"] == "fractional"
    path = write_config(tmp_path, {"symbol": {"r": 0.25}})
    cfg = load_config(path)
    assert cfg["symbol"]["r"] == 0.25
    assert cfg["symbol"]["g"] == 1.0  # default echoed


def test_unknown_key_rejected(tmp_path):
    path = write_config(tmp_path, {"symbol": {"bogus": 1}})
    with pytest.raises(ParameterError, match="symbol.bogus"):
        load_config(path)
    assert main(["dispersion", "--config", path]) == EXIT_USAGE


def test_missing_config_exits_usage(tmp_path):
    assert main(["dispersion", "--config", str(tmp_path / "none.json")]) == EXIT_USAGE


def test_dispersion_outputs_and_row_count(tmp_path):
    path = write_config(tmp_path, {
        "symbol": {"r": 0.5},
        "dispersion": {"moduli": [2.0 ** j for j in range(8)]},
    })
    out = tmp_path / "out"
    assert main(["dispersion", "--config", path, "--out", str(out)]) == EXIT_OK
    lines = (out / "dispersion.csv").read_text().splitlines()
    assert lines[0].startswith("# config_sha256:")
    assert lines[1].startswith("# content_sha256:")
    assert lines[2].split(",")[0] == "xi_mod"
    assert len(lines) == 3 + 8  # two hash comments + header + 8 rows
    summary = json.loads((out / "dispersion_summary.json").read_text())
    assert summary["bracket_all_inside"]


def test_degenerate_row_recorded_exit_zero(tmp_path):
    path = write_config(tmp_path, {
        "symbol": {"g": 3.0},
        "dispersion": {"moduli": [0.01, 64.0]},
    })
    out = tmp_path / "out"
    assert main(["dispersion", "--config", path, "--out", str(out)]) == EXIT_OK
    body = (out / "dispersion.csv").read_text()
    assert "DegenerateParameterError" in body


def test_rerun_byte_identical(tmp_path):
    path = write_config(tmp_path, {"dispersion": {"moduli": [1.0, 8.0]}})
    out = tmp_path / "out"
    main(["dispersion", "--config", path, "--out", str(out)])
    first = (out / "dispersion.csv").read_bytes()
    first_json = (out / "dispersion_summary.json").read_bytes()
    main(["dispersion", "--config", path, "--out", str(out)])
    assert (out / "dispersion.csv").read_bytes() == first
    assert (out / "dispersion_summary.json").read_bytes() == first_json


def test_sweep_is_alias_of_dispersion(tmp_path):
    path = write_config(tmp_path, {"dispersion": {"moduli": [1.0]}})
    out1, out2 = tmp_path / "a", tmp_path / "b"
    main(["dispersion", "--config", path, "--out", str(out1)])
    main(["sweep", "--config", path, "--out", str(out2)])
    strip = lambda p: (p / "dispersion.csv").read_text().splitlines()[1:]
    assert strip(out1) == strip(out2)


def test_evolve_outputs_fit_and_cross_check(tmp_path):
    path = write_config(tmp_path, {
        "symbol": {"r": 0.5},
        "evolve": {"xi_mod": 8.0, "n_cells": 96, "T": 4.0, "dt": 5e-3},
    })
    out = tmp_path / "out"
    assert main(["evolve", "--config", path, "--out", str(out)]) == EXIT_OK
    header = (out / "evolve.csv").read_text().splitlines()[2]
    assert header == "t,E,D,lyapunov"
    summary = json.loads((out / "evolve_summary.json").read_text())
    assert summary["fit"]["quality"] > 0.99
    assert summary["dispersion_cross_check"]["rel_difference"] < 0.10


def test_evolve_zero_data_reports_fit_error(tmp_path):
    path = write_config(tmp_path, {
        "evolve": {"initial_h": 0.0, "T": 0.1, "dt": 0.01, "n_cells": 64},
    })
    out = tmp_path / "out"
    assert main(["evolve", "--config", path, "--out", str(out)]) == EXIT_OK
    summary = json.loads((out / "evolve_summary.json").read_text())
    assert "fit_error" in summary


def test_evolve_zero_dt_exits_usage(tmp_path):
    path = write_config(tmp_path, {"evolve": {"dt": 0.0, "T": 1.0}})
    assert main(["evolve", "--config", path, "--out", str(tmp_path / "o")]) == EXIT_USAGE


def test_synthesize_torus_report(tmp_path):
    path = write_config(tmp_path, {
        "symbol": {"r": 1.0},
        "synthesize": {"domain": "torus", "lattice_radius": 3, "T": 1.0,
                       "law": "exponential", "fit_window": [0.1, 1.0]},
    })
    out = tmp_path / "out"
    assert main(["synthesize", "--config", path, "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "synthesis_report.json").read_text())
    assert report["fit"]["law"] == "exponential"
    assert report["curve_meta"]["domain"] == "torus"
    assert "resolved_config" in report


def test_verify_subset_exit_zero(tmp_path):
    path = write_config(tmp_path, {"verify": {"only": [1, 2, 12]}})
    out = tmp_path / "out"
    assert main(["verify", "--config", path, "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "verify_report.json").read_text())
    assert report["all_passed"]
    assert [c["id"] for c in report["criteria"]] == [1, 2, 12]


def test_bad_command_exits_usage():
    assert main(["frobnicate"]) == EXIT_USAGE
