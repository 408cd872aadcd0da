"""End-to-end checks of the command line front end (in-process)."""
import json
import math
import os

import pytest

from cmcforge import __version__
from cmcforge import cli
from cmcforge.genus0 import lambda_of_c, total_abs_curvature


def run(argv):
    """Invoke main() and normalize SystemExit into a return code."""
    try:
        return cli.main(list(argv))
    except SystemExit as exc:
        return exc.code


# ---------------------------------------------------------------------------
# catalog


def test_catalog_text_lists_every_surface(capsys):
    assert run(["catalog"]) == 0
    out = capsys.readouterr().out
    for name in ("catenoid", "enneper", "noid(3)", "noid(4)", "noid(5)"):
        assert name in out
    line = next(l for l in out.splitlines() if l.startswith("noid(3)"))
    assert "ends=3" in line
    assert "0.222222" in line  # upper end of the certified c interval


def test_catalog_json(capsys):
    assert run(["catalog", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    entries = {e["name"]: e for e in doc["catalog"]}
    assert set(entries) == {"catenoid", "enneper", "noid(3)", "noid(4)",
                            "noid(5)"}
    lo, hi = entries["catenoid"]["certified_c"]
    assert lo == pytest.approx(-0.75)
    assert hi == pytest.approx(0.25)
    lo, hi = entries["noid(4)"]["certified_c"]
    assert lo == pytest.approx(-5.0 / 16.0)
    assert hi == pytest.approx(3.0 / 16.0)
    # simply connected data has no period problem to certify against
    lo, hi = entries["enneper"]["certified_c"]
    assert lo == -math.inf and hi == 0.25
    assert "inf" in entries["catenoid"]["punctures"]


# ---------------------------------------------------------------------------
# ranges


def test_ranges_pair_text(capsys):
    assert run(["ranges", "--m", "3", "--n", "3"]) == 0
    out = capsys.readouterr().out
    assert "m=3 n=3 ends=4" in out
    assert "c range: (-5/16, 0) u (0, 3/16)" in out
    assert "TA/pi range: (8, 12) u (12, 16)" in out


def test_ranges_pair_json(capsys):
    assert run(["ranges", "--m", "2", "--n", "3", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["m"] == 2 and rep["n"] == 3 and rep["ends"] == 3
    assert rep["c_range"]["negative"] == ["-4/9", "0"]
    assert rep["c_range"]["positive"] == ["0", "2/9"]
    assert rep["ta_over_pi"]["positive_c"] == ["4", "8"]


def test_ranges_table_is_default(capsys):
    assert run(["ranges"]) == 0
    table = capsys.readouterr().out
    assert run(["ranges", "--table"]) == 0
    assert capsys.readouterr().out == table
    for frag in ("-5/16", "-9/64", "-7/36", "-21/400", "-13/144"):
        assert frag in table


def test_ranges_table_json(capsys):
    assert run(["ranges", "--table", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)["table"]
    assert len(rows) == 5
    row = next(r for r in rows if (r["m"], r["n"]) == (3, 4))
    assert row["c_range"]["negative"][0] == "-9/64"
    assert row["c_range"]["positive"][1] == "7/64"


def test_ranges_m_without_n_is_usage_error(capsys):
    assert run(["ranges", "--m", "3"]) == 1
    assert "--m and --n must be given together" in capsys.readouterr().err


def test_ranges_rejects_bad_wedge(capsys):
    assert run(["ranges", "--m", "1", "--n", "3"]) == 1
    assert "error" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# solve


def test_solve_catenoid_report(capsys):
    assert run(["solve", "--surface", "catenoid", "--c", "0.1",
                "--no-meta"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["surface"] == "catenoid"
    assert rep["c"] == 0.1
    assert rep["lambda"] == pytest.approx(lambda_of_c(0.1))
    assert rep["max_su2_residual"] < 1e-7
    assert abs(complex(*rep["xi"])) == pytest.approx(1.0)
    assert rep["reducibility"] in ("point", "geodesic", "all")
    law = 2.0 * abs(math.cos(math.pi * lambda_of_c(0.1)))
    assert rep["trace_law"] == pytest.approx(law)
    assert rep["trace_law_error"] <= 1e-6
    assert abs(rep["abs_trace_rho"] - law) <= 1e-6
    assert "meta" not in rep


def test_solve_writes_report_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run(["solve", "--surface", "noid(3)", "--c", "0.05",
                "--no-meta", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert out.read_text() == text
    rep = json.loads(text)
    assert rep["reducibility"] == "point"
    assert rep["beta"] > 0
    assert set(rep["su2_residuals"]) == {"1,1", "2,1", "3,1"}


def test_solve_meta_stamp(capsys):
    assert run(["solve", "--surface", "catenoid", "--c", "0.05"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["meta"]["version"] == __version__
    assert rep["meta"]["generated_at"].endswith("Z")


def test_solve_output_is_deterministic_without_meta(capsys):
    argv = ["solve", "--surface", "catenoid", "--c", "0.05", "--no-meta"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first
    assert "generated_at" not in first


# ---------------------------------------------------------------------------
# usage errors and exit codes


def test_unknown_surface_exits_one(capsys):
    assert run(["solve", "--surface", "sphere", "--c", "0.1"]) == 1
    assert "error" in capsys.readouterr().err


def test_c_outside_certified_range_exits_one(capsys):
    assert run(["solve", "--surface", "catenoid", "--c", "0.3"]) == 1
    assert "certified range" in capsys.readouterr().err


def test_force_bypasses_range_check(capsys):
    # the open-interval endpoint is excluded but still unitarizable
    argv = ["solve", "--surface", "catenoid", "--c", "-0.75", "--no-meta"]
    assert run(argv) == 1
    assert "certified range" in capsys.readouterr().err
    assert run(argv + ["--force"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["max_su2_residual"] < 1e-7


def test_pipeline_failure_exits_two(capsys):
    # past the range the normalization genuinely breaks down
    assert run(["solve", "--surface", "noid(3)", "--c", "0.24",
                "--force"]) == 2
    assert "verification failure" in capsys.readouterr().err


def test_solve_at_zero_curvature_is_trivial(capsys):
    # the frame is the identity, so the bare mirrors are already unitary
    assert run(["solve", "--surface", "catenoid", "--c", "0",
                "--no-meta"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["max_su2_residual"] == 0.0
    assert "abs_trace_rho" not in rep


def test_mesh_requires_nonzero_c(tmp_path, capsys):
    assert run(["mesh", "--surface", "catenoid", "--c", "0",
                "--out", str(tmp_path / "m.obj")]) == 1
    assert "nonzero" in capsys.readouterr().err


def test_tol_window_enforced(capsys):
    assert run(["solve", "--surface", "catenoid", "--c", "0.1",
                "--tol", "1e-5"]) == 1
    assert "--tol" in capsys.readouterr().err


def test_bad_grid_spec_exits_one(tmp_path, capsys):
    assert run(["mesh", "--surface", "catenoid", "--c", "0.1",
                "--out", str(tmp_path / "m.obj"), "--grid", "big"]) == 1
    assert "NUxNV" in capsys.readouterr().err


def test_missing_subcommand_exits_one(capsys):
    assert run([]) == 1
    assert run(["frobnicate"]) == 1


# ---------------------------------------------------------------------------
# mesh


def test_mesh_exports_obj_and_report(tmp_path, capsys):
    obj = tmp_path / "cat.obj"
    repf = tmp_path / "cat.json"
    assert run(["mesh", "--surface", "catenoid", "--c", "0.1",
                "--out", str(obj), "--grid", "8x8", "--orbit-depth", "1",
                "--report", str(repf), "--no-ta", "--no-meta"]) == 0
    text = obj.read_text()
    assert text.startswith("# cmcforge mesh")
    assert "surface=catenoid" in text
    rep = json.loads(repf.read_text())
    assert rep == json.loads(capsys.readouterr().out)
    stats = rep["mesh_stats"]
    assert stats["vertices"] > 0 and stats["faces"] > 0
    assert stats["orbit_copies"] == 4
    assert rep["max_su2_residual"] < 1e-7


def test_mesh_reports_total_curvature(tmp_path, capsys):
    obj = tmp_path / "cat.obj"
    assert run(["mesh", "--surface", "catenoid", "--c", "0.1",
                "--out", str(obj), "--grid", "8x8", "--no-meta"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["TA_formula"] == pytest.approx(total_abs_curvature(2, 0.1))
    assert abs(rep["TA_numeric"] - rep["TA_formula"]) \
        <= 0.05 * rep["TA_formula"]


# ---------------------------------------------------------------------------
# verify and config


def test_verify_ranges_suite(capsys):
    assert run(["verify", "--suite", "ranges"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
    assert lines and all(l.startswith("PASS") for l in lines)


def test_config_sets_defaults_and_flags_win(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tol": 1e-3, "no-meta": True}))
    argv = ["--config", str(cfg), "solve", "--surface", "catenoid",
            "--c", "0.1"]
    assert run(argv) == 1  # config tol is outside the allowed window
    assert "--tol" in capsys.readouterr().err
    assert run(argv + ["--tol", "1e-10"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert "meta" not in rep  # no-meta default came from the config


def test_unreadable_config_exits_one(tmp_path, capsys):
    assert run(["--config", str(tmp_path / "nope.json"), "catalog"]) == 1
    assert "cannot read --config" in capsys.readouterr().err
