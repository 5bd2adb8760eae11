import json

import pytest

from unruh_flux import cli
from unruh_flux.quadrature import QuadratureSpec


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_fdr_check(capsys):
    code, out = run(capsys, "fdr-check")
    assert code == 0 and json.loads(out.out)["pass"]


def test_fdr_check_invalid(capsys):
    code, out = run(capsys, "fdr-check", "--omega0", "0.1")
    assert code == 2 and "underdamped regime required" in out.err
    code, out = run(capsys, "fdr-check", "--coupling", "0")
    assert code == 2 and "coupling must be nonzero" in out.err


def test_correlator_swap_and_past(capsys):
    _, a = run(capsys, "correlator", "--p=-2,2", "--q=-0.3,1")
    _, b = run(capsys, "correlator", "--p=-0.3,1", "--q=-2,2")
    a, b = json.loads(a.out), json.loads(b.out)
    assert a["value_re"] == pytest.approx(b["value_re"], abs=a["error"] + b["error"])
    assert a["value_im"] == pytest.approx(-b["value_im"], abs=a["error"] + b["error"])
    _, c = run(capsys, "correlator", "--p=-2,-2", "--q=1,-0.5")
    c = json.loads(c.out)
    assert c["value_re"] == 0 and c["terms_active"] == []


def test_single_cell_grid(tmp_path):
    out = tmp_path / "g.csv"
    assert cli.main(["stress-grid", "--grid=-2:-2:1,2:2:1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# stress-grid schema v")
    assert len(lines) == 3 and lines[2].endswith(",ok")


def test_grid_in_past_wedge_runs_no_quadrature(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise AssertionError("quadrature invoked")

    monkeypatch.setattr("unruh_flux.correlator.integrate_omega", boom)
    out = tmp_path / "p.csv"
    assert cli.main(["stress-grid", "--grid=-3:-0.5:6,-3:-0.5:6", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[2:]
    assert len(rows) == 36 and all(r.endswith(",ok") for r in rows)


def test_grid_flags_skipped_cells(tmp_path):
    out = tmp_path / "g.json"
    assert cli.main(["stress-grid", "--grid=-3:3:10,-3:3:10", "--format", "json", "--out", str(out)]) == 0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(recs) == 100
    skipped = [r for r in recs if r["status"] != "ok"]
    assert skipped and all(r["t_uu"] is None for r in skipped)
    assert all(abs(r["t_uu"]) < 1e-6 for r in recs if r["status"] == "ok")


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"model": {"a": 1, "omega0": 0.1, "gamma": 0.05}}))
    code, _ = run(capsys, "fdr-check", "--config", str(cfg))
    assert code == 0
    code, _ = run(capsys, "fdr-check", "--config", str(cfg), "--omega0", "0.01")
    assert code == 2


def test_io_error(capsys):
    code, out = run(capsys, "stress-grid", "--grid=-1:-1:1,1:1:1", "--out", "/nonexistent/dir/x.csv")
    assert code == 3


def test_bad_grid(capsys):
    code, _ = run(capsys, "stress-grid", "--grid=nonsense")
    assert code == 2


def test_flux_commands(capsys):
    code, out = run(capsys, "flux")
    assert code == 0 and json.loads(out.out)["pass"]
    code, out = run(capsys, "flux", "--tau-min", "0", "--tau-max", "0")
    assert code == 0 and json.loads(out.out)["flux"] == 0
    code, _ = run(capsys, "flux", "--lambda-left", "0.999")
    assert code == 2


def test_polarization(tmp_path):
    out = tmp_path / "pol.csv"
    assert cli.main(["polarization", "--levels=-4,1", "--n-points", "5", "--out", str(out)]) == 0
    rows = [r.split(",") for r in out.read_text().splitlines()[2:]]
    for r in rows:
        if float(r[4]) < 0:
            assert float(r[5]) == 0
    assert max(float(r[7]) for r in rows) <= 1e-6


def test_convergence_failure_exit(capsys, monkeypatch):
    monkeypatch.setattr(cli.RunConfig, "spec", lambda self: QuadratureSpec(max_subdivisions=1, rel_tol=1e-14, abs_tol=1e-300))
    code, _ = run(capsys, "correlator", "--p=-2,2", "--q=-3,3")
    assert code == 4


def test_oracle_compare_subset(tmp_path, capsys):
    pts = tmp_path / "pts.json"
    pts.write_text(json.dumps([[[-2, 2], [-3, 3]], [[1, 2], [0.5, 3]], [[-2, 2], [1, -1]]]))
    code, out = run(capsys, "oracle-compare", "--points", str(pts))
    assert code == 0 and json.loads(out.out)["max_rel_dev"] <= 0.05
