import hashlib
import json

import numpy as np
import pytest

import curvewave as cw
from curvewave import formats
from curvewave.cli import main

from conftest import random_field, rotated_box_energy


def write_config(tmp_path, **overrides):
    cfg = {
        "frame": {"n": 64, "scales": 4},
        "operator": {"kind": "halfwave", "sign": "+", "t": 0.25, "c0": 1.0},
        "model": {"kind": "constant"},
        "columns": {"count": 3, "scales": [3]},
        "seed": 7,
        "n_fields": 5,
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


class TestFrameCheck:
    def test_default_passes(self, tmp_path, capsys):
        rc = main(["--config", write_config(tmp_path), "frame-check"])
        out = capsys.readouterr().out
        report = json.loads(out)
        assert rc == 0
        assert report["parseval_err"] <= 1e-10
        assert report["roundtrip_err"] <= 1e-10

    def test_non_power_of_two_exits_2(self, tmp_path):
        rc = main(["--config", write_config(tmp_path, frame={"n": 63, "scales": 3}), "frame-check"])
        assert rc == 2

    def test_too_many_scales_exits_2(self, tmp_path):
        rc = main(["--config", write_config(tmp_path, frame={"n": 64, "scales": 9}), "frame-check"])
        assert rc == 2

    def test_missing_config_exits_2(self, tmp_path):
        rc = main(["--config", str(tmp_path / "nope.json"), "frame-check"])
        assert rc == 2


class TestTransform:
    def test_round_trip_and_outputs(self, tmp_path, rng, capsys):
        field_path = tmp_path / "in.field"
        formats.write_field(field_path, random_field(rng, 64))
        out_dir = tmp_path / "out"
        rc = main(["--config", write_config(tmp_path), "--out", str(out_dir), "transform", str(field_path)])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["roundtrip_err"] <= 1e-10
        assert (out_dir / "coefficients.csv").exists()
        assert (out_dir / "reconstruction.field").exists()
        assert (out_dir / "input_magnitude.pgm").exists()

    def test_zero_field_empty_csv(self, tmp_path, capsys):
        field_path = tmp_path / "zero.field"
        formats.write_field(field_path, np.zeros((64, 64), complex))
        out_dir = tmp_path / "out"
        rc = main(["--config", write_config(tmp_path), "--out", str(out_dir), "transform", str(field_path)])
        assert rc == 0
        lines = (out_dir / "coefficients.csv").read_text().strip().splitlines()
        assert len(lines) == 1  # header only

    def test_single_curvelet_visualization(self, tmp_path, frame64, capsys):
        mu = cw.CurveletIndex(3, 2, 2, 2)
        field_path = tmp_path / "needle.field"
        formats.write_field(field_path, cw.waveform(frame64, mu))
        out_dir = tmp_path / "out"
        rc = main(["--config", write_config(tmp_path), "--out", str(out_dir), "transform", str(field_path)])
        assert rc == 0
        rec = formats.read_field(out_dir / "reconstruction.field")
        wedge = frame64.wedge(mu.j, mu.ell)
        frac = rotated_box_energy(
            frame64, mu, rec, half_major=3.0 / np.sqrt(wedge.rho), half_minor=3.0 / wedge.rho
        )
        assert frac >= 0.95  # reconstruction keeps the needle geometry
        assert (out_dir / "input_magnitude.pgm").exists()

    def test_malformed_field_exits_2(self, tmp_path):
        bad = tmp_path / "bad.field"
        bad.write_bytes(b"garbage\n\x00\x01")
        rc = main(["--config", write_config(tmp_path), "transform", str(bad)])
        assert rc == 2

    def test_wrong_grid_exits_2(self, tmp_path, rng):
        field_path = tmp_path / "in.field"
        formats.write_field(field_path, random_field(rng, 32))
        rc = main(["--config", write_config(tmp_path), "transform", str(field_path)])
        assert rc == 2


class TestPropagateMatrixSparsity:
    def test_propagate(self, tmp_path, rng, capsys):
        field_path = tmp_path / "in.field"
        f = random_field(rng, 64)
        formats.write_field(field_path, f)
        out_dir = tmp_path / "out"
        rc = main(["--config", write_config(tmp_path), "--out", str(out_dir), "propagate", str(field_path)])
        assert rc == 0
        out = formats.read_field(out_dir / "propagated.field")
        assert np.allclose(out, cw.apply_halfwave(f, 0.25, "+"), atol=1e-12)

    def test_matrix_identity_is_gram(self, tmp_path, frame64, capsys):
        cfg = write_config(tmp_path, operator={"kind": "identity"}, columns={"count": 2, "scales": [3]})
        out_dir = tmp_path / "out"
        rc = main(["--config", cfg, "--out", str(out_dir), "matrix"])
        assert rc == 0
        matrix = cw.SparseOperatorMatrix.read_csv(
            frame64, cw.OperatorSpec.from_json({"kind": "identity"}), out_dir / "matrix.csv"
        )
        for col in matrix.columns:
            flat = frame64.flat_of_index(col.col_index)
            i = np.flatnonzero(col.rows_flat == flat)
            assert len(i) == 1
            diag = frame64.wedge(col.col_index.j, col.col_index.ell).atom_norm2
            assert abs(col.values[i[0]] - diag) <= 1e-10

    def test_matrix_then_sparsity(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        out_dir = tmp_path / "out"
        assert main(["--config", cfg, "--out", str(out_dir), "matrix"]) == 0
        capsys.readouterr()
        rc = main(["--config", cfg, "--out", str(out_dir), "sparsity", str(out_dir / "matrix.csv")])
        assert rc == 0
        report = json.loads((out_dir / "decay_report.json").read_text())
        assert "median_slope" in report and "concentration" in report
        curve = (out_dir / "decay_curve.csv").read_text().splitlines()
        assert curve[0] == "radius,energy_fraction"
        assert len(curve) > 10

    def test_matrix_determinism(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["--config", cfg, "--out", str(out_a), "matrix"]) == 0
        assert main(["--config", cfg, "--out", str(out_b), "matrix"]) == 0
        ha = hashlib.sha256((out_a / "matrix.csv").read_bytes()).hexdigest()
        hb = hashlib.sha256((out_b / "matrix.csv").read_bytes()).hexdigest()
        assert ha == hb


class TestFlowCommand:
    def test_straight_trajectory_csv(self, tmp_path, capsys):
        out_dir = tmp_path / "out"
        rc = main(
            ["--config", write_config(tmp_path), "--out", str(out_dir), "flow",
             "--x0", "0.2", "0.5", "--xi0", "16", "0", "--branch", "+", "--t", "0.3"]
        )
        assert rc == 0
        lines = (out_dir / "trajectory.csv").read_text().strip().splitlines()
        assert lines[0] == "t,x1,x2,xi1,xi2,theta"
        last = [float(v) for v in lines[-1].split(",")]
        assert last[0] == pytest.approx(0.3)
        assert last[1] == pytest.approx(0.5, abs=1e-9)  # x1 = 0.2 + 0.3
        assert last[2] == pytest.approx(0.5, abs=1e-12)
        assert last[5] == pytest.approx(0.0, abs=1e-12)
