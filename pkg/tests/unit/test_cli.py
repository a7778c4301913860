"""Tests for CLI commands."""

import json

from typer.testing import CliRunner

from entrolab.cli.main import app, run
from entrolab.models.scenario import RunStatus, ScenarioResult, SelftestOutcome

runner = CliRunner()

CSV_HEADER = "n,size,log_size,prefix_inf,increment,stabilized_alpha"


class TestMainCli:
    """Tests for main CLI."""

    def test_version(self):
        """Test --version flag."""
        result = runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert "entrolab version" in result.output

    def test_help(self):
        """Test --help flag."""
        result = runner.invoke(app, ["--help"])
        assert result.exit_code == 0
        assert "Algebraic entropy" in result.output
        assert "at-check" in result.output

    def test_no_args(self):
        """Test CLI with no args shows help."""
        result = runner.invoke(app, [])
        assert "Usage:" in result.output


class TestRunEntryPoint:
    """Tests for the console-script entry point."""

    def test_usage_error_exits_with_one(self):
        """Test a missing argument is exit code 1, not click's 2."""
        assert run(["entropy"]) == 1

    def test_unknown_option(self):
        """Test an unknown option is a usage error."""
        assert run(["entropy", "shift_z2", "--horizon", "3"]) == 1

    def test_version(self):
        """Test --version returns 0."""
        assert run(["--version"]) == 0

    def test_command_error(self):
        """Test a scenario error is exit code 1."""
        assert run(["entropy", "no_such_scenario"]) == 1


class TestEntropyCli:
    """Tests for the entropy command."""

    def test_csv_to_stdout(self):
        """Test the trajectory table is written as CSV."""
        result = runner.invoke(app, ["entropy", "shift_z2", "--n-max", "6"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 7
        assert lines[1].startswith("1,2,")
        assert lines[-1].startswith("6,64,")
        assert lines[-1].endswith(",2")

    def test_csv_to_file(self, tmp_path):
        """Test --out writes the CSV and reports alpha."""
        path = tmp_path / "shift.csv"
        result = runner.invoke(app, ["entropy", "shift_z2", "--n-max", "5", "--out", str(path)])
        assert result.exit_code == 0
        assert path.read_text().splitlines()[0] == CSV_HEADER
        assert "Stabilized alpha = 2" in result.output

    def test_json(self):
        """Test --json prints the report instead of CSV."""
        result = runner.invoke(app, ["--json", "entropy", "shift_z2", "--n-max", "5"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["table"]["sizes"] == [2, 4, 8, 16, 32]
        assert data["estimate"]["stabilized_alpha"] == 2

    def test_inconclusive(self):
        """Test a short horizon exits 0, or 3 with --strict-inconclusive."""
        args = ["entropy", "shift_z2", "--n-max", "3"]
        assert runner.invoke(app, args).exit_code == 0
        assert runner.invoke(app, [*args, "--strict-inconclusive"]).exit_code == 3

    def test_wrong_command_for_kind(self):
        """Test a series scenario is refused by entropy."""
        result = runner.invoke(app, ["entropy", "series_s3"])
        assert result.exit_code == 1
        assert "entrolab series" in result.output

    def test_error_as_json(self):
        """Test errors are JSON objects in JSON mode."""
        result = runner.invoke(app, ["--json", "entropy", "no_such_scenario"])
        assert result.exit_code == 1
        data = json.loads(result.stdout)
        assert data["error"] is True
        assert data["code"] == "SCENARIO_ERROR"

    def test_scenario_file(self, tmp_path):
        """Test a scenario given by path."""
        path = tmp_path / "tiny.json"
        path.write_text(
            json.dumps(
                {
                    "schema_version": 1,
                    "name": "tiny",
                    "kind": "entropy",
                    "family": {"kind": "direct_sum", "table": "z_3"},
                    "endo": {"endo": "shift"},
                    "subgroup": {"kind": "ball", "radius": 0},
                    "n_max": 4,
                }
            )
        )
        result = runner.invoke(app, ["entropy", str(path)])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[-1].startswith("4,81,")


class TestLadderAndSeriesCli:
    """Tests for the ladder and series commands."""

    def test_chain(self):
        """Test chains run through the ladder command."""
        result = runner.invoke(app, ["ladder", "chain_torsion_z6", "--n-max", "5"])
        assert result.exit_code == 0
        assert "torsion[6]" in result.output
        assert "sup = 6" in result.output

    def test_ladder_json(self, tmp_path):
        """Test the ladder report written to a file."""
        path = tmp_path / "ladder.json"
        result = runner.invoke(
            app, ["--json", "ladder", "inner_finitary_ut", "--out", str(path)]
        )
        assert result.exit_code == 0
        assert json.loads(path.read_text()) == json.loads(result.stdout)
        assert json.loads(result.stdout)["ladder"]["sup_alpha"] == 1

    def test_series(self):
        """Test S3 is reported as not nilpotent."""
        result = runner.invoke(app, ["series", "series_s3"])
        assert result.exit_code == 0
        assert "not nilpotent" in result.output
        assert "Center order: 1" in result.output


class TestHarnessCli:
    """Tests for at-check, dagger-check and conjugation-check."""

    def test_at_check(self):
        """Test the shift over the center of DirectSum(UT3)."""
        result = runner.invoke(app, ["at-check", "ds_ut3_shift_at", "--n-max", "4"])
        assert result.exit_code == 0
        assert "exact_equality" in result.output

    def test_at_check_violation(self, mocker):
        """Test a violation exits with 2."""
        mocker.patch(
            "entrolab.cli.harness.run_scenario",
            return_value=ScenarioResult(
                "fake", "at", RunStatus.VIOLATION, {"verdict": "violation"}
            ),
        )
        result = runner.invoke(app, ["--json", "at-check", "ds_ut3_shift_at"])
        assert result.exit_code == 2
        assert json.loads(result.stdout) == {"verdict": "violation"}

    def test_dagger_check(self):
        """Test the certificate over a trivial kernel."""
        result = runner.invoke(app, ["dagger-check", "dagger_trivial_kernel", "--n-max", "4"])
        assert result.exit_code == 0
        assert "Counting inequality holds for n <= 4" in result.output

    def test_dagger_record_eta(self):
        """Test --record-eta adds eta counts to the report."""
        result = runner.invoke(
            app, ["--json", "dagger-check", "ds_ut3_dagger", "--n-max", "2", "--record-eta"]
        )
        assert result.exit_code == 0
        steps = json.loads(result.stdout)["steps"]
        assert [s["eta_verified"] for s in steps] == [8, 64]

    def test_at_check_refuses_dagger_scenario(self):
        """Test scenario kinds are matched to commands."""
        result = runner.invoke(app, ["at-check", "heis_dagger"])
        assert result.exit_code == 1
        assert "dagger-check" in result.output

    def test_conjugation_check(self):
        """Test the S3 conjugation scenario prints both trajectories and agrees."""
        result = runner.invoke(app, ["conjugation-check", "conjugation_s3"])
        assert result.exit_code == 0
        assert "Conjugate trajectories agree in size" in result.output
        assert "alpha = 1" in result.output

    def test_conjugation_check_json(self):
        """Test the JSON report carries both tables."""
        result = runner.invoke(app, ["--json", "conjugation-check", "conjugation_q8", "--n-max", "3"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["agree"] is True
        assert data["original"]["sizes"] == data["conjugated"]["sizes"] == [4, 4, 4]
        assert data["conjugator"] == {"family": "finite", "index": 6}

    def test_conjugation_check_difference(self, mocker):
        """Test differing trajectories exit with 2."""
        mocker.patch(
            "entrolab.cli.harness.run_scenario",
            return_value=ScenarioResult(
                "fake", "conjugation", RunStatus.VIOLATION, {"agree": False}
            ),
        )
        result = runner.invoke(app, ["--json", "conjugation-check", "conjugation_s3"])
        assert result.exit_code == 2
        assert json.loads(result.stdout) == {"agree": False}

    def test_conjugation_scenario_needs_its_command(self):
        """Test conjugation scenarios are refused by other commands."""
        result = runner.invoke(app, ["entropy", "conjugation_q8"])
        assert result.exit_code == 1
        assert "conjugation-check" in result.output


class TestSelftestCli:
    """Tests for selftest."""

    def test_list(self):
        """Test --list names bundled scenarios."""
        result = runner.invoke(app, ["selftest", "--list"])
        assert result.exit_code == 0
        assert "shift_z2" in result.output

    def test_list_json(self):
        """Test --list in JSON mode."""
        result = runner.invoke(app, ["--json", "selftest", "--list"])
        names = [entry["name"] for entry in json.loads(result.stdout)]
        assert "series_s3" in names

    def test_only_with_reports(self, tmp_path):
        """Test --only runs one scenario and writes its report and a summary."""
        result = runner.invoke(
            app, ["selftest", "--only", "shift_z2", "--only", "series_s3", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["passed"] is True
        assert [s["name"] for s in summary["scenarios"]] == ["shift_z2", "series_s3"]
        assert (tmp_path / "shift_z2.json").is_file()

    def test_failure_exits_with_two(self, mocker):
        """Test a failed expectation exits with 2."""
        mocker.patch(
            "entrolab.cli.selftest.run_selftest",
            return_value=[SelftestOutcome("x", RunStatus.OK, ("alpha: expected 2, got 3",))],
        )
        result = runner.invoke(app, ["selftest"])
        assert result.exit_code == 2
        assert "alpha: expected 2, got 3" in result.output

    def test_strict_inconclusive(self, mocker):
        """Test inconclusive outcomes exit with 3 under --strict-inconclusive."""
        mocker.patch(
            "entrolab.cli.selftest.run_selftest",
            return_value=[SelftestOutcome("x", RunStatus.INCONCLUSIVE)],
        )
        assert runner.invoke(app, ["selftest"]).exit_code == 0
        assert runner.invoke(app, ["selftest", "--strict-inconclusive"]).exit_code == 3
