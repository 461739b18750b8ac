"""
Integration tests for reproducible CLI reports
"""

import csv
import json
from pathlib import Path

import pytest

from setfermat.cli import EXIT_MISMATCH, EXIT_OK, main
from setfermat.demo import DemoReport

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


def run_twice(capsys, argv):
    """Run the same command twice and return both outputs"""
    outputs = []
    for _ in range(2):
        main(list(argv))
        outputs.append(capsys.readouterr().out)
    return outputs


class TestReproducibleReports:
    """Test byte-identical reports for identical inputs"""

    @pytest.mark.parametrize(
        "argv",
        [
            ["validate", "--problem", str(CONFIG_DIR / "example61.json")],
            ["stationarity", "--problem", str(CONFIG_DIR / "example61.json"), "--dump-polytopes"],
            ["stationarity", "--problem", str(CONFIG_DIR / "polyhedral_cone.yaml"), "--relation", "u"],
            ["relate", "--sets", str(CONFIG_DIR / "sets_example.json")],
            ["descend", "--problem", str(CONFIG_DIR / "singleton_box.yaml"), "--seed", "3"],
            [
                "oracle",
                "--problem",
                str(CONFIG_DIR / "example61.json"),
                "--check",
                "convexity",
                "--trials",
                "20",
            ],
        ],
    )
    def test_identical_output(self, capsys, argv):
        """Test that a second run prints the same bytes"""
        first, second = run_twice(capsys, argv)
        assert first
        assert first == second

    def test_csv_matches_report(self, capsys, tmp_path):
        """Test that the CSV trace has one row per reported iterate"""
        csv_path = tmp_path / "trace.csv"
        argv = ["descend", "--problem", str(CONFIG_DIR / "singleton_box.yaml"), "--csv", str(csv_path)]
        assert main(argv) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        with open(csv_path, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == report["result"]["iterations"]
        for row, record in zip(rows, report["result"]["iterates"]):
            assert int(row["k"]) == record["k"]
            assert float(row["x1"]) == record["x"][0]
            assert bool(int(row["accepted"])) == record["accepted"]

    def test_demo_mismatch_exit_code(self, capsys, mocker):
        """Test exit 1 when a golden check fails"""
        failing = DemoReport()
        failing.expect("forced", 1, 2)
        mocker.patch("setfermat.cli.run_demo", return_value=failing)
        assert main(["demo"]) == EXIT_MISMATCH
        assert '"ok": false' in capsys.readouterr().out
