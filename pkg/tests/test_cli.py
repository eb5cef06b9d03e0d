"""End-to-end checks of the command-line surface (exit codes, formats)."""

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from noetherlab.chan import QuantumChannel, max_action_deviation
from noetherlab.cli import main, simplex_grid, su2_tradeoff_records, u1_tradeoff_records
from noetherlab.su2cov import extremal_channel
from noetherlab.su2rep import SpinJ

SCHEMA = json.loads((Path(__file__).resolve().parent.parent
                     / "docs" / "tradeoff_record.schema.json").read_text())


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "noetherlab.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


class TestSimplexGrid:
    def test_vertices_at_unit_step(self):
        assert sorted(simplex_grid(2, 1)) == [(0.0, 1.0), (1.0, 0.0)]

    def test_counts(self):
        # compositions of 4 into 3 parts: C(6, 2) = 15
        assert len(list(simplex_grid(3, 4))) == 15

    def test_rows_sum_to_one(self):
        for w in simplex_grid(4, 5):
            assert abs(sum(w) - 1) < 1e-12


class TestSu2Tradeoff:
    def test_qubit_curve_satisfies_identity(self):
        records = su2_tradeoff_records(1, 0.01)
        for r in records:
            sd = r.sqrt_delta
            assert abs(r.unitarity - (1 - 4 * sd * (1 - sd))) < 1e-10
            assert r.ok

    def test_spin1_cloud_within_lines(self):
        records = su2_tradeoff_records(2, 0.05)
        assert len(records) == 231  # compositions of 20 into 3 parts
        assert all(r.ok for r in records)

    def test_cli_csv_output(self, tmp_path):
        out = tmp_path / "rows.csv"
        code, _, err = run_cli("su2", "tradeoff", "--two-j", "1", "--grid", "0.5",
                               "--out", str(out))
        assert code == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["two_j", "p_0", "p_1", "delta", "sqrt_delta", "unitarity",
                           "one_minus_u", "bound_lower", "bound_upper", "ok"]
        assert len(rows) == 4  # header + three grid points

    def test_cli_json_validates_against_schema(self, tmp_path):
        jsonschema = pytest.importorskip("jsonschema")
        out = tmp_path / "rows.json"
        code, _, _ = run_cli("su2", "tradeoff", "--two-j", "2", "--grid", "0.5",
                             "--format", "json", "--out", str(out))
        assert code == 0
        jsonschema.validate(json.loads(out.read_text()), SCHEMA)

    def test_bad_flags_exit_2(self):
        code, _, _ = run_cli("su2", "tradeoff", "--two-j", "1")
        assert code == 2
        code, _, _ = run_cli("su2", "tradeoff", "--two-j", "0", "--grid", "0.5")
        assert code == 2


class TestSu2Kappa:
    def test_json_payload(self):
        code, out, _ = run_cli("su2", "kappa", "--two-jA", "1", "--two-jB", "2")
        assert code == 0
        obj = json.loads(out)
        assert obj == {"kappa_minus": -2 / 3, "kappa_plus": 4 / 3,
                       "two_L_minus": 3, "two_L_plus": 1}

    def test_invalid_spin_exit_2(self):
        code, _, err = run_cli("su2", "kappa", "--two-jA", "0", "--two-jB", "2")
        assert code == 2 and "error" in err


class TestSu2ChannelExport:
    def test_export_and_reload(self, tmp_path):
        out = tmp_path / "e.json"
        code, _, _ = run_cli("su2", "channel", "--two-jA", "1", "--two-jB", "2",
                             "--two-L", "3", "--out", str(out))
        assert code == 0
        loaded = QuantumChannel.load_json(out)
        direct = extremal_channel(SpinJ(1), SpinJ(2), 3)
        assert max_action_deviation(loaded, direct) < 1e-12

    def test_bad_ladder_exit_2(self):
        code, _, _ = run_cli("su2", "channel", "--two-jA", "1", "--two-jB", "1",
                             "--two-L", "5")
        assert code == 2


class TestU1Tradeoff:
    def test_grid_one_gives_corners(self):
        records = u1_tradeoff_records([0, 1], 1.0)
        assert len(records) == 4
        corners = {(r.params["p00"], r.params["p11"]) for r in records}
        assert corners == {(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)}

    def test_no_record_above_the_bound(self):
        for r in u1_tradeoff_records([0, 1], 0.02):
            assert r.unitarity <= r.bound_upper + 1e-9
            assert r.ok

    def test_width_rescaling(self):
        narrow = {(r.params["p00"], r.params["p11"]): r for r in u1_tradeoff_records([0, 1], 0.5)}
        wide = {(r.params["p00"], r.params["p11"]): r for r in u1_tradeoff_records([0, 2], 0.5)}
        for key, n in narrow.items():
            w = wide[key]
            # same populations: deviation grows by width^2, the bound column
            # keeps the same value because sqrt(delta)/width is invariant
            assert abs(w.delta - 4 * n.delta) < 1e-12
            assert abs(w.bound_upper - n.bound_upper) < 1e-12

    def test_nonincreasing_levels_exit_2(self):
        code, _, _ = run_cli("u1", "tradeoff", "--levels", "1,0", "--grid", "0.5")
        assert code == 2

    def test_cli_runs_clean(self, tmp_path):
        out = tmp_path / "u1.csv"
        code, _, err = run_cli("u1", "tradeoff", "--levels", "0,1", "--grid", "0.1",
                               "--out", str(out))
        assert code == 0
        assert "0 bound violations" in err


class TestU1Build:
    def test_build_from_json(self, tmp_path):
        spec_file = tmp_path / "in.json"
        spec_file.write_text(json.dumps({
            "levels": [0, 1],
            "gamma": [[0.0, 1.0], [1.0, 0.0]],
            "phases": [[1, 1, 0.0]],
        }))
        out = tmp_path / "chan.json"
        code, stdout, _ = run_cli("u1", "build", "--json", str(spec_file),
                                  "--out", str(out))
        assert code == 0
        summary = json.loads(stdout)
        assert abs(summary["unitarity"] - 1 / 3) < 1e-10
        assert abs(summary["deviation"] - 1 / 3) < 1e-12
        assert summary["bound_satisfied"]
        loaded = QuantumChannel.load_json(out)
        assert loaded.d_in == 2

    def test_bad_gamma_exit_2(self, tmp_path):
        spec_file = tmp_path / "in.json"
        spec_file.write_text(json.dumps({"levels": [0, 1], "gamma": [[0.5, 0.5], [0.2, 0.5]]}))
        code, _, _ = run_cli("u1", "build", "--json", str(spec_file))
        assert code == 2


class TestVerify:
    def test_default_run_passes(self):
        code, out, _ = run_cli("verify", "all", "--seed", "3", "--samples", "1000")
        assert code == 0
        report = json.loads(out)
        assert report["all_passed"]
        assert {c["name"] for c in report["checks"]} == {
            "channel_representation_roundtrip",
            "monte_carlo_vs_closed_form",
            "su2_tradeoff_bounds",
            "u1_tradeoff_bound",
            "inversion_closed_forms",
            "angular_momentum_conservation_split",
        }

    def test_injected_corruption_fails_named_check(self):
        code, out, _ = run_cli("verify", "all", "--seed", "3", "--samples", "1000",
                               "--inject-corrupt")
        assert code == 1
        report = json.loads(out)
        bad = [c for c in report["checks"] if not c["passed"]]
        assert [c["name"] for c in bad] == ["channel_representation_roundtrip"]
        assert "rejected" in bad[0]["detail"]

    def test_report_bytes_deterministic(self):
        _, a, _ = run_cli("verify", "all", "--seed", "42", "--samples", "1000")
        _, b, _ = run_cli("verify", "all", "--seed", "42", "--samples", "1000")
        assert a == b


class TestMainEntry:
    def test_in_process_invocation(self, capsys):
        assert main(["su2", "kappa", "--two-jA", "1", "--two-jB", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert abs(payload["kappa_minus"] + 1 / 3) < 1e-12


class TestThreadCap:
    def test_env_var_caps_pool_and_keeps_results(self, monkeypatch):
        from noetherlab.numkit import thread_count

        reference = [r.as_dict() for r in su2_tradeoff_records(2, 0.2)]
        monkeypatch.setenv("NOETHERLAB_THREADS", "1")
        assert thread_count() == 1
        serial = [r.as_dict() for r in su2_tradeoff_records(2, 0.2)]
        assert serial == reference
