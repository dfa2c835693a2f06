"""Command-line interface: exit codes, CSV/JSON outputs, determinism."""
import json
import math
import shutil
import subprocess
import sys

import pytest

from ambec.cli import main
from ambec.core import SolutionRecord
from ambec.manifest import RunManifest, read_csv, write_csv
from ambec.wigner import CONVENTION

FIG1 = ["--g-a", "3", "--g-am", "-2.8", "--alpha", "2"]
CAT2 = ["--g-a", "-5", "--g-m", "1", "--g-am", "-1.1", "--alpha", "1"]


@pytest.fixture()
def rec_path(tmp_path):
    out = tmp_path / "rec.json"
    assert main(["solve", "--family", "I", *FIG1, "--beta", "1",
                 "--out", str(out)]) == 0
    return out


class TestSolve:
    def test_family_I_record(self, rec_path):
        rec = SolutionRecord.from_json(rec_path.read_text())
        assert rec.mu == pytest.approx(-2.0, abs=1e-12)
        assert rec.epsilon == pytest.approx(-3.0, abs=1e-12)
        assert rec.params.g_m == pytest.approx(2.9, abs=1e-12)
        man = RunManifest.read(str(rec_path.with_suffix("")) + ".manifest.json")
        assert man.command == "solve"
        assert man.outputs == [str(rec_path)]
        assert man.duration_s >= 0.0

    def test_singular_coupling_sum(self, tmp_path, capsys):
        rc = main(["solve", "--family", "I", "--g-a", "3", "--g-am", "-3",
                   "--alpha", "2", "--beta", "1",
                   "--out", str(tmp_path / "x.json")])
        assert rc == 3
        assert capsys.readouterr().err.startswith("error: ")

    def test_family_I_rejects_g_m(self, tmp_path):
        rc = main(["solve", "--family", "I", *FIG1, "--g-m", "2.9",
                   "--beta", "1", "--out", str(tmp_path / "x.json")])
        assert rc == 3

    def test_family_I_needs_beta(self, tmp_path):
        rc = main(["solve", "--family", "I", *FIG1,
                   "--out", str(tmp_path / "x.json")])
        assert rc == 3

    def test_family_II_needs_seeds_or_scan(self, tmp_path):
        rc = main(["solve", "--family", "II", *CAT2,
                   "--out", str(tmp_path / "x.json")])
        assert rc == 3

    def test_family_II_needs_g_m(self, tmp_path):
        rc = main(["solve", "--family", "II", "--g-a", "-5", "--g-am", "-1.1",
                   "--alpha", "1", "--seed-mu", "-0.1",
                   "--seed-epsilon", "-0.4", "--out", str(tmp_path / "x.json")])
        assert rc == 3

    def test_scan_solve_with_window(self, tmp_path):
        out = tmp_path / "cat.json"
        rc = main(["solve", "--family", "II", *CAT2, "--scan",
                   "--mu-range", "-0.2", "-0.05",
                   "--eps-range", "-0.6", "-0.3", "--scan-n", "60",
                   "--out", str(out)])
        assert rc == 0
        rec = SolutionRecord.from_json(out.read_text())
        assert rec.B == pytest.approx(1.3366709, rel=1e-5)

    def test_scan_solve_empty_window(self, tmp_path):
        rc = main(["solve", "--family", "II", *CAT2, "--scan",
                   "--mu-range", "-9", "-8", "--eps-range", "-9", "-8",
                   "--out", str(tmp_path / "x.json")])
        assert rc == 2

    def test_wrong_basin_seed(self, tmp_path, capsys):
        rc = main(["solve", "--family", "II", *CAT2,
                   "--seed-mu", "-0.01", "--seed-epsilon", "-0.02",
                   "--out", str(tmp_path / "x.json")])
        assert rc == 4
        assert "disagrees" in capsys.readouterr().err

    def test_out_of_scope_root(self, tmp_path):
        rc = main(["solve", "--family", "II", *CAT2,
                   "--seed-mu", "-1", "--seed-epsilon", "-5",
                   "--out", str(tmp_path / "x.json")])
        assert rc == 2


class TestTableCommands:
    def test_profile_csv(self, rec_path, tmp_path):
        out = tmp_path / "prof.csv"
        rc = main(["profile", "--solution", str(rec_path), "--grid-l", "30",
                   "--grid-n", "300", "--out", str(out)])
        assert rc == 0
        data = read_csv(str(out))
        assert data.header == ["x", "psi_a_re", "psi_a_im", "psi_m_re",
                               "psi_m_im", "n_a", "n_m"]
        assert len(data.rows) == 300
        assert data.manifest == str(out.with_suffix("")) + ".manifest.json"
        peak = max(r[5] for r in data.rows)
        assert peak > 0

    def test_potential_record_comment(self, rec_path, tmp_path):
        out = tmp_path / "pot.csv"
        assert main(["potential", "--solution", str(rec_path),
                     "--out", str(out)]) == 0
        data = read_csv(str(out))
        assert data.header == ["x", "V_a", "V_m", "phi_a", "phi_m"]
        line = next(c for c in data.comments if c.startswith("record: "))
        stored = json.loads(line[len("record: "):])
        rec = SolutionRecord.from_json(rec_path.read_text())
        assert stored == rec.to_dict()

    def test_residual_values(self, rec_path, tmp_path, capsys):
        out = tmp_path / "res.csv"
        assert main(["residual", "--solution", str(rec_path),
                     "--out", str(out)]) == 0
        data = read_csv(str(out))
        assert data.header == ["r_a", "r_m"]
        (row,) = data.rows
        assert row[0] < 1e-8 and row[1] < 1e-8
        assert "r_a=" in capsys.readouterr().out

    def test_missing_solution_file(self, tmp_path):
        rc = main(["profile", "--solution", str(tmp_path / "nope.json"),
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 3

    def test_corrupt_solution_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{не json")
        rc = main(["profile", "--solution", str(bad),
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 3


class TestEvolve:
    def test_short_run_table(self, rec_path, tmp_path):
        out = tmp_path / "ev.csv"
        rc = main(["evolve", "--solution", str(rec_path), "--t", "0.05",
                   "--dt", "1e-3", "--record-every", "20", "--grid-n", "512",
                   "--out", str(out)])
        assert rc == 0
        data = read_csv(str(out))
        assert data.header == ["t", "N", "N_a", "N_m", "E",
                               "drift_a", "drift_m"]
        assert [r[0] for r in data.rows] == [0.0, 0.02, 0.04, 0.05]
        N0 = data.rows[0][1]
        assert abs(data.rows[-1][1] - N0) < 1e-9 * N0

    def test_kinetic_wrap_exit(self, rec_path, tmp_path):
        rc = main(["evolve", "--solution", str(rec_path), "--t", "1",
                   "--dt", "0.05", "--grid-n", "4096",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 3


class TestWigner:
    def test_inline_cat(self, tmp_path):
        out = tmp_path / "w.csv"
        rc = main(["wigner", "--beta", "1", "--delta", "3",
                   "--kind", "bright_even", "--grid-n", "128",
                   "--out", str(out)])
        assert rc == 0
        data = read_csv(str(out))
        assert data.header == ["x", "p", "W"]
        assert len(data.rows) == 128 * 128
        assert f"convention: {CONVENTION}" in data.comments
        metrics = json.loads((tmp_path / "w.metrics.json").read_text())
        assert metrics["convention"] == CONVENTION
        assert metrics["w00"] > 0
        assert metrics["fringe_spacing"] == pytest.approx(math.pi / 3, rel=0.1)

    def test_solution_molecular_component(self, rec_path, tmp_path):
        out = tmp_path / "wm.csv"
        rc = main(["wigner", "--solution", str(rec_path),
                   "--component", "molecular", "--grid-n", "256",
                   "--out", str(out)])
        assert rc == 0
        metrics = json.loads((tmp_path / "wm.metrics.json").read_text())
        assert metrics["ratio"] > 0

    def test_source_flags_are_exclusive(self, rec_path, tmp_path):
        rc = main(["wigner", "--solution", str(rec_path), "--beta", "1",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 3
        rc = main(["wigner", "--beta", "1", "--out", str(tmp_path / "x.csv")])
        assert rc == 3


class TestScan:
    def test_single_point(self, tmp_path):
        out = tmp_path / "scan.csv"
        mu = -40.0 / 9.0
        rc = main(["scan", *FIG1, "--mu", f"{mu!r}", "--grid-n", "1024",
                   "--out", str(out)])
        assert rc == 0
        data = read_csv(str(out))
        assert data.header == ["mu", "peak_density", "half_width_99",
                               "flatness", "B", "A", "status"]
        (row,) = data.rows
        assert row[-1] == "ok"
        assert row[1] > 0 and row[2] > 0

    def test_out_of_window_rows(self, tmp_path):
        out = tmp_path / "scan.csv"
        rc = main(["scan", *FIG1, "--mu-min", "1", "--mu-max", "2",
                   "--count", "3", "--out", str(out)])
        assert rc == 0
        data = read_csv(str(out))
        assert len(data.rows) == 3
        for row in data.rows:
            assert row[-1] == "unattainable"
            assert math.isnan(row[1])


class TestDeterminism:
    def test_identical_command_identical_bytes(self, rec_path, tmp_path):
        out = tmp_path / "prof.csv"
        argv = ["profile", "--solution", str(rec_path), "--grid-l", "25",
                "--grid-n", "200", "--out", str(out)]
        assert main(argv) == 0
        first = out.read_bytes()
        assert main(argv) == 0
        assert out.read_bytes() == first


class TestManifestPlumbing:
    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "t.csv"
        rows = [(0.1, 2, "ok"), (float("nan"), -3, "bad")]
        write_csv(str(path), ["a", "b", "c"], rows, "man.json",
                  comments=["note: frozen"])
        data = read_csv(str(path))
        assert data.comments == ["note: frozen"]
        assert data.header == ["a", "b", "c"]
        assert data.rows[0] == [0.1, 2.0, "ok"]
        assert math.isnan(data.rows[1][0]) and data.rows[1][2] == "bad"
        assert data.manifest == "man.json"

    def test_manifest_round_trip(self, tmp_path):
        path = tmp_path / "m.json"
        man = RunManifest("solve", {"beta": 2.0}, inputs=["a"],
                          outputs=["b"], duration_s=0.25)
        man.write(str(path))
        back = RunManifest.read(str(path))
        assert back == man


class TestEntryPoint:
    @pytest.mark.skipif(shutil.which("ambec") is None,
                        reason="console script not on PATH")
    def test_installed_script(self, tmp_path):
        out = tmp_path / "rec.json"
        proc = subprocess.run(
            ["ambec", "solve", "--family", "I", *FIG1, "--beta", "1",
             "--out", str(out)],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0, proc.stderr
        assert "family I:" in proc.stdout
        rec = SolutionRecord.from_json(out.read_text())
        assert rec.mu == pytest.approx(-2.0, abs=1e-12)

    def test_module_invocation_matches(self, tmp_path):
        out = tmp_path / "rec.json"
        proc = subprocess.run(
            [sys.executable, "-m", "ambec.cli", "solve", "--family", "I",
             *FIG1, "--beta", "1", "--out", str(out)],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0, proc.stderr
