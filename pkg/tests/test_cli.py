import csv
import json
import logging

import pytest

from valleyqubit.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_PROJECTED, main


def simulate(tmp_path, name, theta, phi=0.0, *extra):
    argv = ["simulate", "--theta", str(theta), "--phi", str(phi), "--out", str(tmp_path), "--name", name, *extra]
    assert main(argv) == EXIT_OK
    return tmp_path / f"{name}.csv"


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestSimulate:
    def test_prints_output_path(self, tmp_path, capsys):
        path = simulate(tmp_path, "eq", 90)
        assert capsys.readouterr().out.strip() == str(path)
        assert (tmp_path / "eq.meta.json").exists()

    def test_deterministic_per_seed(self, tmp_path):
        extra = ("--noise", "poisson", "--exposure", "1e5", "--seed", "17")
        a = simulate(tmp_path, "a", 45, 30, *extra)
        b = simulate(tmp_path, "b", 45, 30, *extra)
        assert a.read_bytes() == b.read_bytes()

    def test_pole_is_flat(self, tmp_path):
        rows = read_rows(simulate(tmp_path, "pole", 0))
        assert len(rows) == 25
        assert all(float(r["intensity"]) == pytest.approx(0.5, abs=1e-12) for r in rows)

    def test_visibility_flag(self, tmp_path):
        rows = read_rows(simulate(tmp_path, "eq", 90, 0, "--visibility", "0.5", "--grid", "0:90:30"))
        assert float(rows[0]["intensity"]) == pytest.approx(0.75, abs=1e-12)

    def test_config_file(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"theta": 90, "grid": "0:180:45", "name": "cfg", "out": str(tmp_path)}))
        assert main(["simulate", "--config", str(config)]) == EXIT_OK
        assert len(read_rows(tmp_path / "cfg.csv")) == 5

    def test_flags_override_config(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"theta": 90, "grid": "0:180:45", "out": str(tmp_path)}))
        assert main(["simulate", "--config", str(config), "--grid", "0:180:15"]) == EXIT_OK
        assert len(read_rows(tmp_path / "scan.csv")) == 13

    def test_unknown_config_key(self, tmp_path, caplog):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"theta": 90, "colour": "red"}))
        assert main(["simulate", "--config", str(config)]) == EXIT_CONFIG
        assert "colour" in caplog.text

    def test_visibility_and_t2_conflict(self, tmp_path):
        argv = ["simulate", "--theta", "90", "--visibility", "0.5", "--t2", "1e-12", "--out", str(tmp_path)]
        assert main(argv) == EXIT_CONFIG

    def test_usage_error_exits_one(self):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--theta", "abc"])
        assert exc.value.code == 1

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        assert main(["simulate", "--theta", "90", "--out", str(blocker)]) == EXIT_IO


class TestTomo:
    def test_compensated_reconstruction(self, tmp_path):
        scan = simulate(tmp_path, "s", 60, 45)
        calibration = simulate(tmp_path, "cal", 90)
        out = tmp_path / "tomo.json"
        argv = [
            "tomo", str(scan), "--calibration", str(calibration),
            "--compensate-decay", "0.2", "--target", "60,45", "--out", str(out),
        ]
        assert main(argv) == EXIT_OK
        result = json.loads(out.read_text())
        assert result["fidelity_to_target"] >= 0.9999
        assert result["decay_compensation"] == 0.2

    def test_self_calibrated(self, tmp_path):
        scan = simulate(tmp_path, "s", 90)
        out = tmp_path / "tomo.json"
        assert main(["tomo", str(scan), "--self-calibrate", "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["rho"][0][1]["re"] == pytest.approx(0.1, abs=1e-9)

    def test_overcompensation_is_projected(self, tmp_path):
        scan = simulate(tmp_path, "s", 90)
        calibration = simulate(tmp_path, "cal", 90)
        out = tmp_path / "tomo.json"
        argv = ["tomo", str(scan), "--calibration", str(calibration), "--compensate-decay", "0.1", "--out", str(out)]
        assert main(argv) == EXIT_PROJECTED
        assert json.loads(out.read_text())["projection_applied"] is True

    def test_missing_calibration(self, tmp_path, caplog):
        scan = simulate(tmp_path, "s", 90)
        assert main(["tomo", str(scan), "--out", str(tmp_path / "t.json")]) == EXIT_CONFIG
        assert "calibration" in caplog.text

    def test_corrupted_scan_names_line(self, tmp_path, caplog):
        bad = tmp_path / "bad.csv"
        bad.write_text("alpha_deg,intensity\n0,0.6\n15,oops\n30,0.55\n")
        with caplog.at_level(logging.ERROR):
            assert main(["tomo", str(bad), "--self-calibrate", "--q3", "1"]) == EXIT_CONFIG
        assert f"{bad}:3:" in caplog.text

    def test_missing_scan_file(self, tmp_path):
        assert main(["tomo", str(tmp_path / "absent.csv"), "--self-calibrate"]) == EXIT_IO

    def test_q3_required_without_metadata(self, tmp_path):
        bare = tmp_path / "bare.csv"
        bare.write_text("alpha_deg,intensity\n0,0.6\n45,0.5\n90,0.4\n135,0.5\n")
        assert main(["tomo", str(bare), "--self-calibrate", "--out", str(tmp_path / "t.json")]) == EXIT_CONFIG

    def test_batch(self, tmp_path, capsys):
        scans = [simulate(tmp_path, f"s{t}", t) for t in (0, 30, 60, 90)]
        calibration = simulate(tmp_path, "cal", 90)
        capsys.readouterr()
        out_dir = tmp_path / "results"
        argv = ["batch-tomo", *map(str, scans), "--calibration", str(calibration), "--out-dir", str(out_dir),
                "--workers", "2"]
        assert main(argv) == EXIT_OK
        printed = capsys.readouterr().out.split()
        assert printed == [str(out_dir / f"s{t}.tomo.json") for t in (0, 30, 60, 90)]
        assert json.loads((out_dir / "s0.tomo.json").read_text())["rho"][0][0]["re"] == pytest.approx(1.0)

    def test_batch_failure_writes_nothing(self, tmp_path):
        good = simulate(tmp_path, "good", 60)
        calibration = simulate(tmp_path, "cal", 90)
        out_dir = tmp_path / "results"
        argv = ["batch-tomo", str(good), str(tmp_path / "absent.csv"), "--calibration", str(calibration),
                "--out-dir", str(out_dir)]
        assert main(argv) == EXIT_IO
        assert not out_dir.exists()


class TestUncertainty:
    def test_pure_state_sweep(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        assert main(["uncertainty", "--theta", "90", "--out", str(out)]) == EXIT_OK
        line = capsys.readouterr().out.strip()
        fields = dict(part.split("=") for part in line.split())
        assert float(fields["min_slack"]) == pytest.approx(0.0, abs=1e-9)
        assert len(read_rows(out)) == 73

    def test_reconstructed_matrix_matches_angles(self, tmp_path):
        scan = simulate(tmp_path, "s", 60, 45)
        calibration = simulate(tmp_path, "cal", 90)
        tomo = tmp_path / "tomo.json"
        argv = ["tomo", str(scan), "--calibration", str(calibration), "--compensate-decay", "0.2", "--out", str(tomo)]
        assert main(argv) == EXIT_OK

        from_rho, from_angles = tmp_path / "rho.csv", tmp_path / "angles.csv"
        assert main(["uncertainty", "--rho", str(tomo), "--out", str(from_rho)]) == EXIT_OK
        assert main(["uncertainty", "--theta", "60", "--phi", "45", "--out", str(from_angles)]) == EXIT_OK
        for a, b in zip(read_rows(from_rho), read_rows(from_angles)):
            assert a["alpha_deg"] == b["alpha_deg"]
            for key in ("entropy_sum", "deviation_product", "robertson_bound", "coherence_sum"):
                assert float(a[key]) == pytest.approx(float(b[key]), abs=1e-6)

    def test_unphysical_matrix(self, tmp_path, caplog):
        rho = tmp_path / "rho.json"
        entries = [[{"re": 1.2, "im": 0.0}, {"re": 0.0, "im": 0.0}], [{"re": 0.0, "im": 0.0}, {"re": -0.2, "im": 0.0}]]
        rho.write_text(json.dumps({"rho": entries}))
        assert main(["uncertainty", "--rho", str(rho), "--out", str(tmp_path / "s.csv")]) == EXIT_CONFIG
        assert "positive semidefinite" in caplog.text

    def test_needs_exactly_one_state(self, tmp_path):
        assert main(["uncertainty", "--out", str(tmp_path / "s.csv")]) == EXIT_CONFIG


class TestDynamics:
    def test_summary_on_stdout(self, tmp_path, capsys):
        argv = ["dynamics", "--b-field", "9", "--out", str(tmp_path / "p.csv"), "--summary", str(tmp_path / "s.json")]
        assert main(argv) == EXIT_OK
        summary = json.loads(capsys.readouterr().out)
        assert abs(summary["rotation_deg"]) == pytest.approx(23.66, abs=0.05)
        assert summary["contrast"] == pytest.approx(0.678, abs=0.001)
        assert json.loads((tmp_path / "s.json").read_text()) == summary
        assert len(read_rows(tmp_path / "p.csv")) == 25

    def test_verify_logs_quadrature(self, tmp_path, caplog):
        argv = ["dynamics", "--b-field", "9", "--verify", "--n-steps", "20000",
                "--out", str(tmp_path / "p.csv"), "--summary", str(tmp_path / "s.json")]
        with caplog.at_level(logging.INFO):
            assert main(argv) == EXIT_OK
        assert "Quadrature check" in caplog.text

    def test_too_few_steps(self, tmp_path):
        argv = ["dynamics", "--n-steps", "10", "--out", str(tmp_path / "p.csv"), "--summary", str(tmp_path / "s.json")]
        assert main(argv) == EXIT_CONFIG
