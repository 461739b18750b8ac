"""
Tests for the command-line interface
"""

import json

import pytest

from setfermat.cli import EXIT_ERROR, EXIT_NOT_STATIONARY, EXIT_OK, SetFermatCLI, create_parser, main, parse_vector


@pytest.fixture
def run(capsys):
    """Run main() and return (exit code, parsed JSON report)"""

    def invoke(*argv):
        code = main(list(argv))
        out = capsys.readouterr().out
        return code, json.loads(out) if out.strip().startswith("{") else out

    return invoke


@pytest.fixture
def singleton_file(problem_file):
    """F(x) = {(x, x)} without constraints"""
    return problem_file({"n": 1, "components": [["x1", "x1"]]}, "singleton.json")


@pytest.fixture
def singleton_box_file(problem_file):
    """F(x) = {(x, x)} on [0, 1] with xbar = 1"""
    data = {
        "n": 1,
        "components": [["x1", "x1"]],
        "omega": {"type": "box", "lower": [0], "upper": [1]},
        "xbar": [1],
    }
    return problem_file(data, "singleton_box.yaml")


@pytest.fixture
def sets_file(problem_file):
    """Three points A and two points B in R^2"""
    data = {"cone": "orthant", "dim": 2, "A": [[0, 0], [1, -1], [2, 2]], "B": [[1, 1], [2, 0]]}
    return problem_file(data, "sets.json")


class TestParser:
    """Test argument parsing"""

    def test_parse_vector(self):
        """Test comma-separated vectors"""
        assert parse_vector("1,-2.5, 3") == [1.0, -2.5, 3.0]

    def test_parse_vector_rejects_text(self):
        """Test invalid numbers"""
        with pytest.raises(Exception):
            parse_vector("1,two")

    def test_stationarity_defaults(self):
        """Test the default relation and flags"""
        args = create_parser().parse_args(["stationarity", "--problem", "p.json"])
        assert args.relation == "l"
        assert args.dump_polytopes is False
        assert args.augment is None

    def test_oracle_relation_names(self):
        """Test that the non-strict notions are spelled l-nonstrict and u-nonstrict"""
        base = ["oracle", "--problem", "p.json", "--check", "minimality", "--relation"]
        for name in ("l-nonstrict", "u-nonstrict"):
            assert create_parser().parse_args(base + [name]).relation == name
        with pytest.raises(SystemExit):
            create_parser().parse_args(base + ["l-strict"])

    def test_no_command(self, capsys):
        """Test that a bare invocation prints help and fails"""
        assert main([]) == EXIT_ERROR
        assert "usage" in capsys.readouterr().out


class TestProblemCommands:
    """Test subcommands that read a problem file"""

    def test_validate(self, run, golden_file):
        """Test the validate summary"""
        code, report = run("validate", "--problem", str(golden_file))
        assert code == EXIT_OK
        assert report["header"]["tool"] == "setfermat"
        assert len(report["header"]["problem_sha256"]) == 64
        result = report["result"]
        assert result["valid"] is True
        assert (result["n"], result["m"], result["p"]) == (1, 2, 2)
        assert result["affine"] is True
        assert result["omega"] == {"type": "free"}

    def test_invalid_file(self, run, problem_file):
        """Test exit 2 with a machine-readable error"""
        code, report = run("validate", "--problem", str(problem_file({"n": 1})))
        assert code == EXIT_ERROR
        assert report["error"] == "ConfigurationError"
        assert "components" in report["message"]

    def test_eval(self, run, golden_file):
        """Test the image and Jacobians at a given point"""
        code, report = run("eval", "--problem", str(golden_file), "--at=0.5")
        assert code == EXIT_OK
        assert report["result"]["image"]["points"] == [[1.5, -0.5], [-1.5, 0.5]]
        assert report["result"]["jacobians"] == [[[1.0], [1.0]], [[-1.0], [-1.0]]]

    def test_wrong_point_dimension(self, run, golden_file):
        """Test that --at must live in R^n"""
        code, report = run("eval", "--problem", str(golden_file), "--at=1,2")
        assert code == EXIT_ERROR
        assert report["error"] == "PreconditionError"

    def test_eval_overflow(self, run, problem_file):
        """Test exit 2 with a DomainError when a component overflows"""
        path = problem_file({"n": 1, "components": [["exp(x1)", "x1"]]}, "overflow.json")
        code, report = run("eval", "--problem", str(path), "--at=1000")
        assert code == EXIT_ERROR
        assert report["error"] == "DomainError"
        assert "exp(x1)" in report["message"]

    def test_unexpected_exception(self, run, golden_file, mocker):
        """Test that errors outside the package hierarchy still exit 2 with a diagnostic"""
        mocker.patch.object(SetFermatCLI, "evaluate", side_effect=RuntimeError("solver crashed"))
        code, report = run("eval", "--problem", str(golden_file))
        assert code == EXIT_ERROR
        assert report["error"] == "RuntimeError"
        assert report["message"] == "solver crashed"

    def test_scalarize(self, run, golden_file):
        """Test f_l and f_u at x = 0.3 with the default anchor"""
        code, report = run("scalarize", "--problem", str(golden_file), "--at=0.3")
        assert code == EXIT_OK
        assert report["result"]["lower"]["value"] == pytest.approx(0.3)
        assert report["result"]["anchor"] == [0.0]

    def test_scalarize_point_at_origin(self, run, golden_file):
        """Test Psi_e(0) = 0 with both unit vectors active"""
        code, report = run("scalarize", "--problem", str(golden_file), "--point=0,0")
        assert code == EXIT_OK
        result = report["result"]
        assert result["psi"] == 0.0
        assert result["subdifferential_vertices"] == [[1.0, 0.0], [0.0, 1.0]]
        assert result["generator_indices"] == [0, 1]

    def test_scalarize_point_single_vertex(self, run, golden_file):
        """Test Psi_e((3, -1)) = 3 with one active generator"""
        code, report = run("scalarize", "--problem", str(golden_file), "--point=3,-1")
        assert code == EXIT_OK
        assert report["result"]["psi"] == 3.0
        assert report["result"]["subdifferential_vertices"] == [[1.0, 0.0]]

    def test_scalarize_point_dimension(self, run, golden_file):
        """Test that --point must live in the image space"""
        code, report = run("scalarize", "--problem", str(golden_file), "--point=1,2,3")
        assert code == EXIT_ERROR
        assert report["error"] == "DimensionMismatchError"

    def test_oracle_minimality(self, run, golden_file):
        """Test a passing grid check"""
        code, report = run("oracle", "--problem", str(golden_file), "--check", "minimality", "--step", "0.01")
        assert code == EXIT_OK
        assert report["result"]["holds"] is True
        assert report["result"]["caveat"] == "no violation on this grid"

    def test_oracle_missing_param(self, run, golden_file):
        """Test that the invariance check needs --k"""
        code, report = run("oracle", "--problem", str(golden_file), "--check", "invariance")
        assert code == EXIT_ERROR
        assert report["error"] == "PreconditionError"

    def test_oracle_unknown_check(self, run, golden_file):
        """Test an unregistered check name"""
        code, report = run("oracle", "--problem", str(golden_file), "--check", "telepathy")
        assert code == EXIT_ERROR
        assert "telepathy" in report["message"]

    def test_descend_with_csv(self, run, singleton_box_file, tmp_path):
        """Test the descent trace and its CSV copy"""
        csv_path = tmp_path / "trace.csv"
        code, report = run("descend", "--problem", str(singleton_box_file), "--csv", str(csv_path))
        assert code == EXIT_OK
        assert report["result"]["termination"] == "ResidualBelowTol"
        assert abs(report["result"]["final_x"][0]) <= 1e-6
        assert csv_path.read_text().startswith("k,x1,step,merit,residual,accepted")

    def test_tolerance_file(self, run, golden_file, problem_file):
        """Test that --tolerances reaches the report header"""
        tol_file = problem_file({"stat": 1e-6}, "tol.json")
        code, report = run("--tolerances", str(tol_file), "validate", "--problem", str(golden_file))
        assert code == EXIT_OK
        assert report["header"]["tolerances"]["tau_stat"] == 1e-6


class TestStationarityCommand:
    """Test exit codes of the stationarity subcommand"""

    @pytest.mark.parametrize("relation", ["l", "u"])
    def test_golden_stationary(self, run, golden_file, relation):
        """Test exit 0 on the golden example"""
        code, report = run("stationarity", "--problem", str(golden_file), "--relation", relation)
        assert code == EXIT_OK
        assert report["result"]["stationary"] is True

    def test_golden_vector_not_stationary(self, run, golden_file):
        """Test exit 3 for the vector rule"""
        code, _ = run("stationarity", "--problem", str(golden_file), "--relation", "vector")
        assert code == EXIT_NOT_STATIONARY

    def test_singleton_not_stationary(self, run, singleton_file):
        """Test exit 3 with residual 1"""
        code, report = run("stationarity", "--problem", str(singleton_file))
        assert code == EXIT_NOT_STATIONARY
        assert report["result"]["residual"] == pytest.approx(1.0)

    def test_box_bound(self, run, singleton_box_file):
        """Test the lower bound of the box as a stationary point"""
        code, _ = run("stationarity", "--problem", str(singleton_box_file), "--at=0")
        assert code == EXIT_OK
        code, _ = run("stationarity", "--problem", str(singleton_box_file))
        assert code == EXIT_NOT_STATIONARY

    def test_dump_polytopes(self, run, golden_file):
        """Test that polytopes and provenance are included on request"""
        code, report = run("stationarity", "--problem", str(golden_file), "--dump-polytopes")
        assert code == EXIT_OK
        anchor = report["result"]["per_anchor"][0]
        assert anchor["auxiliary"]["kind"] == "G"
        assert anchor["estimate"]["provenance"]

    def test_augment_keeps_decision(self, run, golden_file):
        """Test that dominated components leave the verdict unchanged"""
        code, _ = run("stationarity", "--problem", str(golden_file), "--augment=0.5,0.5")
        assert code == EXIT_OK
        code, _ = run("stationarity", "--problem", str(golden_file), "--relation", "u", "--augment=0.5,0.5")
        assert code == EXIT_OK


class TestSetsCommands:
    """Test relate and minimals"""

    def test_relate(self, run, sets_file):
        """Test both relations on the example sets"""
        code, report = run("relate", "--sets", str(sets_file))
        assert code == EXIT_OK
        result = report["result"]
        assert result["lower_less"] is True
        assert result["strict_lower"] is True
        assert result["gap_l"] == pytest.approx(-1.0)
        assert result["upper_less"] is False
        assert result["strict_upper"] is False
        assert result["gap_u"] > 0
        assert result["equivalent_l"] is False

    def test_relate_single_points(self, run, problem_file):
        """Test the flat report for A = {(0, 0)} and B = {(1, 1)}"""
        data = {"cone": "orthant", "A": [[0, 0]], "B": [[1, 1]]}
        code, report = run("relate", "--sets", str(problem_file(data, "pair.json")))
        assert code == EXIT_OK
        assert report["result"] == {
            "lower_less": True,
            "upper_less": True,
            "strict_lower": True,
            "strict_upper": True,
            "gap_l": -1.0,
            "gap_u": -1.0,
            "equivalent_l": False,
            "equivalent_u": False,
        }

    def test_relate_needs_b(self, run, problem_file):
        """Test exit 2 when B is missing"""
        code, report = run("relate", "--sets", str(problem_file({"cone": "orthant", "A": [[0, 0]]}, "a.json")))
        assert code == EXIT_ERROR
        assert report["error"] == "PreconditionError"

    def test_minimals(self, run, sets_file):
        """Test weakly minimal and maximal elements of A"""
        code, report = run("minimals", "--sets", str(sets_file))
        assert code == EXIT_OK
        result = report["result"]
        assert result["WMin"]["indices"] == [0, 1]
        assert result["WMax"]["points"] == [[2.0, 2.0]]
        assert result["SMin"]["indices"] == []

    def test_minimals_single_kind(self, run, sets_file):
        """Test --kind"""
        code, report = run("minimals", "--sets", str(sets_file), "--kind", "Min")
        assert code == EXIT_OK
        assert list(report["result"]) == ["Min"]


class TestDemo:
    """Test the golden pipeline command"""

    def test_demo_passes(self, run):
        """Test exit 0 and every check passing"""
        code, report = run("demo")
        assert code == EXIT_OK
        assert report["result"]["ok"] is True
        assert all(check["ok"] for check in report["result"]["checks"])
