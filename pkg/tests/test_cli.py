import csv
import json
import math

import numpy as np
import pytest

from scattercorr import ScattererSpec, WaveContext, correlation_scalar
from scattercorr.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerifyScalar:
    def test_disk_acceptance_invocation(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify-scalar", "--dim", "2", "--obstacle", "disk", "--radius", "1",
            "--bc", "neumann", "--omega", "2", "--v", "1", "--pair", "3,0;0,4")
        assert code == 0
        report = json.loads(out)
        assert report["passed"] is True
        assert report["max_rel_residual"] < 1e-8

    def test_free_space_run(self, capsys):
        code, out, _ = run_cli(capsys, "verify-scalar", "--omega", "2", "--v", "1",
                               "--pair", "0.5,0;0,1.2")
        assert code == 0
        assert json.loads(out)["max_rel_residual"] < 1e-10

    def test_invalid_dimension_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["verify-scalar", "--dim", "4", "--pair", "1,0;0,1"])
        assert err.value.code == 2

    def test_missing_pair_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "verify-scalar", "--omega", "2")
        assert code == 2
        assert "pair" in err

    def test_tolerance_failure_exits_1(self, capsys):
        # under-resolved direction rule on a wide pair forces a residual
        code, out, _ = run_cli(
            capsys, "verify-scalar", "--omega", "2", "--v", "1",
            "--pair", "9,0;0,9.5", "--nodes", "8")
        assert code == 1
        assert json.loads(out)["passed"] is False

    def test_interior_point_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys, "verify-scalar", "--obstacle", "disk", "--radius", "1", "--omega", "2",
            "--pair", "0.2,0;0,3")
        assert code == 2
        assert "exterior" in err

    def test_report_checks_and_roundtrips(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        code, _, _ = run_cli(
            capsys, "verify-scalar", "--omega", "2", "--v", "1",
            "--pair", "0.5,0;0,1.2", "--output", str(path))
        assert code == 0
        code, out, _ = run_cli(capsys, "verify-scalar", "--check", str(path))
        assert code == 0
        check = json.loads(out)
        assert check["passed"] is True
        assert check["max_deviation"] <= 1e-15

    def test_byte_identical_reports(self, tmp_path, capsys):
        args = ["verify-scalar", "--omega", "2", "--v", "1", "--pair", "0.5,0;0,1.2"]
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        run_cli(capsys, *args, "--output", str(p1))
        run_cli(capsys, *args, "--output", str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_threads_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("SCATTERCORR_THREADS", "2")
        code, out, _ = run_cli(capsys, "verify-scalar", "--omega", "2", "--v", "1",
                               "--pair", "0.5,0;0,1.2", "--pair", "1,0;0,1")
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_dump_config(self, capsys):
        code, out, _ = run_cli(capsys, "verify-scalar", "--omega", "3", "--dump-config")
        assert code == 0
        config = json.loads(out)
        assert config["omega"] == 3.0
        assert config["command"] == "verify-scalar"


class TestVerifyElastic:
    def test_steel_invocation(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify-elastic", "--dim", "3", "--omega", "9000",
            "--rho", "7900", "--lam", "115e9", "--mu", "77e9",
            "--pair", "0,0,0;0.5,0.6,0.4")
        assert code == 0
        report = json.loads(out)
        assert report["passed"] is True
        assert report["max_rel_residual"] < 1e-8

    def test_bad_medium_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys, "verify-elastic", "--omega", "2", "--mu", "-1", "--pair", "0,0;1,0")
        assert code == 2
        assert "mu" in err


class TestFieldTable:
    def test_annulus_grid_marks_interior_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, "field", "--omega", "2", "--v", "1", "--obstacle", "disk",
            "--radius", "1", "--bc", "dirichlet", "--grid=-2:2:9,-2:2:9",
            "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert len(rows) == 81
        interior = [r for r in rows if r["note"] == "interior"]
        exterior = [r for r in rows if not r["note"]]
        assert interior and exterior
        origin = next(r for r in rows if float(r["x1"]) == 0.0 and float(r["x2"]) == 0.0)
        assert origin["note"] == "interior"
        for row in exterior:
            float(row["re"]), float(row["im"])  # parseable numbers

    def test_csv_column_contract(self, capsys):
        code, out, _ = run_cli(capsys, "field", "--omega", "1", "--v", "1",
                               "--grid", "0:1:2,0:1:2", "--format", "csv")
        assert code == 0
        header = out.splitlines()[0]
        assert header == "x1,x2,re,im,note"

    def test_three_dimensional_slice(self, capsys):
        code, out, _ = run_cli(
            capsys, "field", "--dim", "3", "--omega", "2", "--v", "1",
            "--grid", "0:1:2,0:1:2", "--x3", "0.5", "--kdir", "0,0,1",
            "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert rows[0]["x3"] == "0.5"
        # plane wave along +z: value is e^{i k x3} everywhere on the slice
        want = complex(math.cos(1.0), math.sin(1.0))
        for row in rows:
            assert float(row["re"]) == pytest.approx(want.real, abs=1e-15)
            assert float(row["im"]) == pytest.approx(want.imag, abs=1e-15)


class TestCorrelationTable:
    def test_matches_library_bit_for_bit(self, capsys):
        code, out, _ = run_cli(
            capsys, "correlation", "--omega", "2", "--v", "1", "--obstacle", "disk",
            "--radius", "1", "--bc", "neumann", "--pair", "3,0;0,4", "--format", "csv")
        assert code == 0
        row = next(csv.DictReader(out.splitlines()))
        ctx = WaveContext(2.0, 1.0, 2)
        scat = ScattererSpec.disk(1.0, "neumann")
        direct = correlation_scalar(ctx, scat, np.array([3.0, 0.0]), np.array([0.0, 4.0]))
        assert float(row["re"]) == direct.real
        assert float(row["im"]) == direct.imag


class TestGreenTable:
    def test_pair_rows_and_coincident_marker(self, capsys):
        code, out, _ = run_cli(
            capsys, "green", "--omega", "2", "--v", "1",
            "--pair", "1,0;0,2", "--pair", "1,1;1,1", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert not rows[0]["note"]
        assert "singular" in rows[1]["note"]


class TestProjectorCommand:
    def test_route_difference_within_tolerance(self, capsys):
        code, out, _ = run_cli(
            capsys, "projector", "--omega", "2", "--v", "1", "--obstacle", "disk",
            "--radius", "1", "--bc", "neumann", "--omega-min", "1.6", "--omega-max", "2.4",
            "--pair", "2,0.4;-1.2,2")
        assert code == 0
        report = json.loads(out)
        assert report["max_rel_residual"] < 1e-6

    def test_invalid_window_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys, "projector", "--omega", "2", "--omega-min", "0", "--omega-max", "1",
            "--pair", "1,0;0,2")
        assert code == 2
        assert "window" in err or "frequency" in err


class TestFigures:
    def test_plot_writes_figures_next_to_output(self, tmp_path, capsys):
        out_path = tmp_path / "field.csv"
        code, _, _ = run_cli(
            capsys, "field", "--omega", "2", "--v", "1", "--obstacle", "disk",
            "--radius", "1", "--bc", "neumann", "--grid=-3:3:12,-3:3:12",
            "--format", "csv", "--output", str(out_path), "--plot")
        assert code == 0
        figure = tmp_path / "field_field.png"
        assert figure.exists() and figure.stat().st_size > 0

    def test_plot_verify_residuals(self, tmp_path, capsys):
        out_path = tmp_path / "verify.json"
        code, _, _ = run_cli(
            capsys, "verify-scalar", "--omega", "2", "--v", "1",
            "--pair", "0.5,0;0,1.2", "--output", str(out_path), "--plot")
        assert code == 0
        assert (tmp_path / "verify_verify_scalar_residuals.png").exists()

    def test_plot_pair_and_projector_figures(self, tmp_path, capsys):
        green_out = tmp_path / "green.csv"
        code, _, _ = run_cli(
            capsys, "green", "--omega", "2", "--v", "1",
            "--pair", "1,0;0,2", "--pair", "1,0;0,3", "--pair", "1,1;1,1",
            "--format", "csv", "--output", str(green_out), "--plot")
        assert code == 0
        assert (tmp_path / "green_green.png").stat().st_size > 0

        proj_out = tmp_path / "proj.json"
        code, _, _ = run_cli(
            capsys, "projector", "--omega", "2", "--v", "1", "--omega-min", "1.6",
            "--omega-max", "2.4", "--pair", "1.1,0;0,2.3",
            "--output", str(proj_out), "--plot")
        assert code == 0
        assert (tmp_path / "proj_projector.png").stat().st_size > 0
