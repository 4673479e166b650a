import csv
import json

import pytest

from pagecurve.cli import SCHEMA_VERSION, main

PAGE_CURVE_ANALYTIC_COLUMNS = [
    "r", "k", "analytic_density", "analytic_total", "max_entropy", "provenance",
]
PAGE_CURVE_MC_COLUMNS = [
    "r", "k", "analytic_density", "analytic_total", "max_entropy",
    "mc_mean", "mc_stderr", "mc_variance", "samples", "provenance",
]


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestPageCurve:
    def test_analytic_grid(self, tmp_path):
        out = tmp_path / "c.csv"
        code = main([
            "page-curve", "--modes", "50", "--squeeze", "0.75",
            "--analytic-only", "--grid-step", "0.02", "--out", str(out),
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert header == PAGE_CURVE_ANALYTIC_COLUMNS  # schema_version 1 golden
        assert len(rows) == 51
        middle = rows[25]
        assert float(middle[0]) == 0.5
        assert float(middle[2]) == pytest.approx(0.258266, abs=1e-6)
        assert middle[-1] == "analytic"

    def test_zero_squeezing(self, capsys):
        code = main(["page-curve", "--modes", "50", "--squeeze", "0"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        for line in lines[1:]:
            cells = line.split(",")
            assert float(cells[2]) == 0.0 and float(cells[3]) == 0.0 and float(cells[4]) == 0.0

    def test_monte_carlo_columns(self, tmp_path):
        out = tmp_path / "mc.csv"
        code = main([
            "page-curve", "--modes", "8", "--squeeze", "0.5",
            "--samples", "40", "--seed", "42", "--workers", "1", "--out", str(out),
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert header == PAGE_CURVE_MC_COLUMNS
        assert len(rows) == 9
        assert rows[0][-1] == "mc"
        assert float(rows[0][5]) <= 1e-10  # k=0 sampled entropy

    def test_mc_mean_consistent_with_prediction(self, tmp_path):
        out = tmp_path / "big.csv"
        code = main([
            "page-curve", "--modes", "20", "--squeeze", "0.75",
            "--samples", "400", "--seed", "7", "--workers", "1", "--out", str(out),
        ])
        assert code == 0
        header, rows = read_csv(out)
        mid = rows[10]
        mean, stderr, total = float(mid[5]), float(mid[6]), float(mid[3])
        assert abs(mean - total) <= 3 * stderr + 2.0 / 20

    def test_grid_step_with_samples_is_usage_error(self):
        assert main([
            "page-curve", "--modes", "8", "--squeeze", "0.5",
            "--samples", "10", "--grid-step", "0.5",
        ]) == 1

    def test_unequal_squeezing_list(self, tmp_path):
        out = tmp_path / "u.csv"
        code = main([
            "page-curve", "--modes", "3", "--squeeze", "0.1,0.2,0.0",
            "--analytic-only", "--out", str(out),
        ])
        assert code == 0
        _, rows = read_csv(out)
        assert len(rows) == 4

    def test_squeeze_length_mismatch(self):
        assert main(["page-curve", "--modes", "4", "--squeeze", "0.1,0.2"]) == 1


class TestJsonRoundTrip:
    def test_rerun_reproduces_numeric_columns(self, tmp_path):
        out1 = tmp_path / "a.json"
        args = [
            "page-curve", "--modes", "6", "--squeeze", "0.4",
            "--samples", "25", "--seed", "3", "--workers", "1",
            "--format", "json", "--out", str(out1),
        ]
        assert main(args) == 0
        record = json.loads(out1.read_text())
        assert record["schema_version"] == SCHEMA_VERSION
        assert record["metadata"]["seed"] == 3
        assert record["metadata"]["rng_algorithm"] == "philox4x64"

        out2 = tmp_path / "b.json"
        replay = list(record["command_line"])
        replay[replay.index(str(out1))] = str(out2)
        assert main(replay) == 0
        record2 = json.loads(out2.read_text())
        assert record2["rows"] == record["rows"]
        assert record2["columns"] == record["columns"]


class TestWeingartenCommand:
    def test_a_ell_table(self, capsys):
        assert main(["weingarten", "a-ell", "--max", "4"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        values = [line.split(",")[1] for line in lines[1:]]
        assert values == ["-1", "4", "-16", "64"]

    def test_moment(self, capsys):
        assert main(["weingarten", "moment", "--powers", "1", "--n", "4", "--k", "2"]) == 0
        line = capsys.readouterr().out.strip().splitlines()[1]
        assert line.split(",")[3] == "6/5"

    def test_wg_value(self, capsys):
        assert main(["weingarten", "wg", "--type", "2", "--n", "5"]) == 0
        line = capsys.readouterr().out.strip().splitlines()[1]
        assert line.split(",")[3] == "-1/120"

    def test_omega2(self, capsys):
        assert main(["weingarten", "omega2", "--ladder", "8,16,32,64"]) == 0
        last = capsys.readouterr().out.strip().splitlines()[-1]
        cells = last.split(",")
        assert cells[0] == "extrapolated"
        assert abs(float(cells[1]) - 0.5) <= 1e-3

    def test_capacity_exit_code(self, capsys):
        assert main(["weingarten", "a-ell", "--max", "6"]) == 2

    def test_missing_flags_usage(self):
        assert main(["weingarten", "moment", "--powers", "1"]) == 1


class TestVerifyCommand:
    def test_coefficients_suite_passes(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        assert main(["verify", "--suite", "coefficients", "--out", str(out)]) == 0
        text = capsys.readouterr().out
        assert "[PASS]" in text and "[FAIL]" not in text
        report = json.loads(out.read_text())
        assert all(row[1] for row in report["rows"])

    def test_unknown_suite_usage(self):
        assert main(["verify", "--suite", "bogus"]) == 1


class TestExitCodes:
    def test_usage_error(self):
        assert main(["page-curve", "--modes", "abc", "--squeeze", "0.1"]) == 1

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == 1

    def test_numerical_error_exit(self):
        # tolerance unreachable within the term cap -> truncation -> exit 2
        assert main([
            "page-curve", "--modes", "4", "--squeeze", "5.0",
            "--analytic-only", "--tol", "1e-13",
        ]) == 2


class TestTypicalityCommand:
    def test_runs(self, capsys):
        assert main([
            "typicality", "--modes", "9,16", "--k-rule", "sqrt",
            "--squeeze", "0.5", "--epsilon", "0.2", "--samples", "50",
            "--workers", "1", "--seed", "5",
        ]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("n,k,epsilon")
        assert len(lines) == 3


class TestVarianceCommand:
    def test_runs(self, capsys):
        assert main([
            "variance", "--modes", "8,12", "--squeeze", "0.3",
            "--samples", "60", "--workers", "1", "--seed", "2",
        ]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 3


class TestConjectureCommand:
    def test_runs(self, capsys):
        assert main([
            "conjecture-probe", "--modes", "4", "--squeeze", "0.5", "--k", "2",
            "--samples", "40", "--workers", "1", "--seed", "3",
        ]) == 0
        header = capsys.readouterr().out.strip().splitlines()[0]
        assert "derivative" in header
