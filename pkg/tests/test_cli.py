import csv
import json
import subprocess
import sys

import pytest

import thermoquery.verify
from thermoquery.cli import main, parse_values


def read_csv(path):
    comments, rows = [], []
    with open(path, newline="", encoding="utf-8") as stream:
        header = None
        for line in stream:
            if line.startswith("#"):
                comments.append(line.strip())
            elif header is None:
                header = [c.strip() for c in line.strip().split(",")]
            else:
                rows.append(dict(zip(header, next(csv.reader([line])))))
    return comments, rows


class TestParseValues:
    def test_linspace(self):
        values = parse_values("0:2:5")
        assert values == [0.0, 0.5, 1.0, 1.5, 2.0]

    def test_comma_list(self):
        assert parse_values("2,1,0.5") == [2.0, 1.0, 0.5]

    def test_invalid(self):
        with pytest.raises(ValueError):
            parse_values("a:b:c")


class TestDJKickback:
    def test_curve_ordering_and_header(self, tmp_path):
        out = tmp_path / "kickback.csv"
        assert main(["dj-kickback", "--beta-m", "2.0", "--beta-s", "0:2:9",
                     "--out", str(out)]) == 0
        comments, rows = read_csv(out)
        assert any("subcommand = dj-kickback" in c for c in comments)
        assert any("seed = " in c for c in comments)
        by_beta_s = {}
        for row in rows:
            by_beta_s.setdefault(row["beta_S"], {})[row["case"]] = float(row["beta_S_prime"])
        assert len(by_beta_s) == 9
        for values in by_beta_s.values():
            assert values["constant0"] < values["balanced"] < values["constant1"]

    def test_warm_oracle_collapses_curves(self, tmp_path):
        out = tmp_path / "warm.csv"
        assert main(["dj-kickback", "--beta-m", "0.001", "--beta-s", "0:1:11",
                     "--out", str(out)]) == 0
        _, rows = read_csv(out)
        by_beta_s = {}
        for row in rows:
            by_beta_s.setdefault(row["beta_S"], []).append(float(row["beta_S_prime"]))
        for values in by_beta_s.values():
            assert max(values) - min(values) < 1e-3

    def test_degenerate_gaps_identical_curves(self, tmp_path):
        out = tmp_path / "degenerate.csv"
        assert main(["dj-kickback", "--e1", "0.8", "--e2", "0.8", "--beta-m", "1.0",
                     "--beta-s", "0:1:5", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        by_beta_s = {}
        for row in rows:
            by_beta_s.setdefault(row["beta_S"], set()).add(row["beta_S_prime"])
        assert all(len(values) == 1 for values in by_beta_s.values())

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["dj-kickback", "--beta-s", "0:2:5"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_validation_error_exit_code(self, tmp_path):
        assert main(["dj-kickback", "--e1", "-1.0", "--out", str(tmp_path / "x.csv")]) == 1
        assert main(["dj-kickback", "--beta-s", "junk", "--out", str(tmp_path / "y.csv")]) == 1


class TestDistinguishability:
    def test_diagonal_cells_are_zero(self, tmp_path):
        out = tmp_path / "grid.csv"
        assert main(["distinguishability", "--e1-grid", "0.5,1.0", "--e2-grid", "0.5,1.0",
                     "--n-qubits", "4", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        diagonal = [row for row in rows if row["E1"] == row["E2"]]
        assert len(diagonal) == 2
        assert all(float(row["lhs"]) == 0.0 for row in diagonal)
        assert all(float(row["lhs"]) >= 0.0 for row in rows)

    def test_json_mirror(self, tmp_path):
        out = tmp_path / "grid.json"
        assert main(["distinguishability", "--format", "json", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["config"]["subcommand"] == "distinguishability"
        assert {"N", "E1", "E2", "lhs", "chi", "satisfied"} <= set(data["rows"][0])

    def test_odd_machine_rejected(self, tmp_path):
        assert main(["distinguishability", "--n-qubits", "3",
                     "--out", str(tmp_path / "x.csv")]) == 1


class TestSampleComplexity:
    def test_reference_row_values(self, tmp_path):
        out = tmp_path / "samples.csv"
        assert main(["sample-complexity", "--delta-grid", "0.1", "--t-grid", "0.1,0.5",
                     "--out", str(out)]) == 0
        _, rows = read_csv(out)
        row = next(r for r in rows if float(r["t"]) == 0.1)
        assert int(row["n_star"]) == 116
        assert int(row["k_classical"]) == 5
        assert int(row["n_mixed_query"]) == 9
        assert int(row["n_crossover"]) == 8
        assert row["thermal_beats_probabilistic"] == "False"

    def test_default_grid_runs(self, tmp_path):
        out = tmp_path / "samples.csv"
        assert main(["sample-complexity", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 20 * 7


class TestDetuningSweep:
    def test_default_sweep(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["detuning-sweep", "--beta-s", "0:3:13", "--out", str(out)]) == 0
        comments, rows = read_csv(out)
        assert len(rows) == 8 * 13
        assert len({row["secret"] for row in rows}) == 8
        separation = next(
            float(c.split("=")[1]) for c in comments if "min_pairwise_separation" in c
        )
        assert separation > 0.0

    def test_zero_bias_single_curve(self, tmp_path):
        out = tmp_path / "flat.csv"
        assert main(["detuning-sweep", "--gamma", "1.0,1.0,1.0", "--epsilon", "0.0",
                     "--beta-s", "0:2:5", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        curves = {}
        for row in rows:
            curves.setdefault(row["secret"], []).append(row["beta_S_prime"])
        assert len({tuple(v) for v in curves.values()}) == 1

    def test_gamma_count_validated(self, tmp_path):
        assert main(["detuning-sweep", "--gamma", "1.0,2.0",
                     "--out", str(tmp_path / "x.csv")]) == 1


class TestVerify:
    def test_small_run_passes(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["verify", "--max-n", "2", "--bv-max-n", "2", "--trials", "4",
                     "--seed", "7", "--out", str(out)])
        assert code == 0
        captured = capsys.readouterr().out
        assert "verification PASSED" in captured
        report = json.loads(out.read_text())
        assert report["passed"] is True
        assert report["seed"] == 7

    def test_fixed_seed_reproducible(self):
        a = thermoquery.verify.run_verification(
            max_dj_n=1, max_bv_n=2, tuples_per_instance=3, mask_cases=3, regime_cases=20, seed=5
        )
        b = thermoquery.verify.run_verification(
            max_dj_n=1, max_bv_n=2, tuples_per_instance=3, mask_cases=3, regime_cases=20, seed=5
        )
        assert a.to_dict() == b.to_dict()

    def test_detects_injected_sign_flip(self, monkeypatch):
        import dataclasses

        true_kickback = thermoquery.verify.kickback_outcome

        def corrupted(probe, oracle, mask=None):
            outcome = true_kickback(probe, oracle, mask)
            return dataclasses.replace(outcome, delta_p0=-outcome.delta_p0,
                                        p0_after=outcome.p0_before - outcome.delta_p0)

        monkeypatch.setattr(thermoquery.verify, "kickback_outcome", corrupted)
        report = thermoquery.verify.run_verification(
            max_dj_n=1, max_bv_n=2, tuples_per_instance=3, mask_cases=3, regime_cases=20, seed=5
        )
        assert not report.passed
        failing = [c for c in report.checks if not c.passed]
        assert failing and failing[0].first_failure


class TestConsoleEntry:
    def test_module_invocation_and_stdout(self):
        result = subprocess.run(
            [sys.executable, "-m", "thermoquery", "sample-complexity",
             "--delta-grid", "0.1", "--t-grid", "0.1"],
            capture_output=True, text=True,
        )
        assert result.returncode == 0
        assert "116" in result.stdout
        assert result.stdout.startswith("# thermoquery")

    def test_unknown_subcommand_exits_one(self):
        result = subprocess.run(
            [sys.executable, "-m", "thermoquery", "unknown-thing"],
            capture_output=True, text=True,
        )
        assert result.returncode == 1
