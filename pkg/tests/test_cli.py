"""CLI surface: every subcommand exercised end to end."""

import json

import pytest

from dampex.cli import main


@pytest.fixture()
def datum_cfg(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"family": "gaussian", "dimension": 1,
                             "scale": 1.0}), encoding="utf-8")
    return str(p)


@pytest.fixture()
def pair_cfg(tmp_path):
    p = tmp_path / "pair.json"
    p.write_text(json.dumps({"dimension": 1,
                             "u0": {"family": "gaussian", "scale": 1.0},
                             "u1": {"family": "zero"}}), encoding="utf-8")
    return str(p)


def test_moments_subcommand(datum_cfg, tmp_path, capsys):
    out = tmp_path / "table.json"
    rc = main(["moments", "--data", datum_cfg, "--max-order", "2",
               "--gammas", "0,2", "--out", str(out)])
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["order"] == 2
    entry = {tuple(e["alpha"]): e for e in payload["entries"]}
    assert entry[(1,)]["exact_zero"] is True
    assert entry[(2,)]["raw"] == pytest.approx(2 * entry[(2,)]["value"])
    assert "2.0" in payload["weighted_norms"]


def test_solve_subcommand(pair_cfg, tmp_path):
    out = tmp_path / "sol.csv"
    rc = main(["solve", "--data", pair_cfg, "--t", "0.0,1.0",
               "--xi-grid", "lin:-1,1,5", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,xi1,re,im"
    assert len(lines) == 1 + 2 * 5


def test_solve_tensorizes_the_grid_per_axis(tmp_path):
    cfg = tmp_path / "pair2.json"
    cfg.write_text(json.dumps({"dimension": 2,
                               "u0": {"family": "gaussian", "scale": 1.0},
                               "u1": {"family": "zero"}}), encoding="utf-8")
    out = tmp_path / "sol2.csv"
    rc = main(["solve", "--data", str(cfg), "--t", "1.0",
               "--xi-grid", "lin:-1,1,3", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,xi1,xi2,re,im"
    assert len(lines) == 1 + 3 * 3


def test_solve_forced_representation_errors_on_band(pair_cfg, capsys):
    rc = main(["solve", "--data", pair_cfg, "--t", "1.0",
               "--xi-grid", "lin:-1,1,3", "--rep", "2.2"])
    assert rc == 2
    assert "singular" in capsys.readouterr().err.lower() or rc == 2


def test_solve_regular_representation_covers_band(pair_cfg, tmp_path):
    out = tmp_path / "sol.csv"
    rc = main(["solve", "--data", pair_cfg, "--t", "1.0",
               "--xi-grid", "lin:-1,1,3", "--rep", "2.4", "--out", str(out)])
    assert rc == 0


def test_expansion_subcommand_terms_and_canonical(datum_cfg, capsys):
    rc = main(["expansion", "--data", datum_cfg, "--kind", "B", "--k", "2",
               "--print", "canonical"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["structurally_zero"] is True
    rc = main(["expansion", "--data", datum_cfg, "--kind", "A", "--k", "2",
               "--print", "terms"])
    payload = json.loads(capsys.readouterr().out)
    assert rc == 0 and payload["terms"]


def test_norm_subcommand_json_and_csv(pair_cfg, tmp_path, capsys):
    rc = main(["norm", "--data", pair_cfg, "--t", "100", "--k", "0",
               "--region", "ball:0.5", "--tol", "1e-8"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["results"][0]["norm"] > 0
    out = tmp_path / "norms.csv"
    rc = main(["norm", "--data", pair_cfg, "--t", "100,1000", "--k", "0",
               "--region", "full", "--out", str(out)])
    assert rc == 0
    assert out.read_text().startswith("t,norm")


def test_norm_bad_region_spec(pair_cfg):
    assert main(["norm", "--data", pair_cfg, "--t", "10", "--k", "0",
                 "--region", "cube:1"]) == 2


def test_report_subcommand(tmp_path):
    cfg = {
        "t_grid": {"t_min": 100.0, "t_max": 1e3, "points": 3},
        "cases": [{"name": "g", "data": {
            "dimension": 1,
            "u0": {"family": "gaussian", "scale": 1.0},
            "u1": {"family": "zero"}},
            "k_values": [0], "checks": ["rate", "sandwich"]}],
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg), encoding="utf-8")
    out_dir = tmp_path / "report"
    rc = main(["report", "--config", str(cfg_path), "--out-dir", str(out_dir)])
    assert rc == 0
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["passed"] is True


def test_report_nonzero_exit_on_failure(tmp_path):
    cfg = {
        "rate_tolerance": 1e-12,
        "t_grid": {"t_min": 100.0, "t_max": 1e3, "points": 3},
        "cases": [{"name": "g", "data": {
            "dimension": 1,
            "u0": {"family": "gaussian", "scale": 1.0},
            "u1": {"family": "zero"}},
            "k_values": [0], "checks": ["rate"]}],
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg), encoding="utf-8")
    rc = main(["report", "--config", str(cfg_path),
               "--out-dir", str(tmp_path / "r")])
    assert rc == 1


def test_config_error_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["moments", "--data", str(bad), "--max-order", "1"]) == 2
