import json

import pytest
from click.testing import CliRunner

from web_linearizer.cli.main import cli

from conftest import EXAMPLE_1, PARALLEL


@pytest.fixture
def runner():
    return CliRunner()


class TestCurvatureCommand:
    def test_first_example(self, runner):
        result = runner.invoke(cli, ["curvature", "--f", EXAMPLE_1])
        assert result.exit_code == 0
        assert "= -1" in result.output

    def test_report_file(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(cli, ["curvature", "--f", EXAMPLE_1, "--point", "0,0", "--report-out", str(out)])
        assert result.exit_code == 0
        document = json.loads(out.read_text(encoding="utf-8"))
        assert document["schema_version"] == "1"
        assert document["result"]["curvature"] == "-1"
        assert document["result"]["parallelizable"] is False
        assert "versions" in document["provenance"]

    def test_config_file_with_flag_override(self, runner, tmp_path):
        config = tmp_path / "job.json"
        config.write_text(json.dumps({"f": PARALLEL, "point": "1,2"}), encoding="utf-8")
        out = tmp_path / "report.json"
        result = runner.invoke(cli, ["curvature", "--config-file", str(config), "--point", "0,0",
                                     "--report-out", str(out)])
        assert result.exit_code == 0
        document = json.loads(out.read_text(encoding="utf-8"))
        assert document["result"]["job"]["point"] == ["0", "0"]
        assert document["result"]["parallelizable"] is True


class TestExitCodes:
    def test_parse_error(self, runner):
        result = runner.invoke(cli, ["curvature", "--f", "x +* y"])
        assert result.exit_code == 2

    def test_missing_function(self, runner):
        result = runner.invoke(cli, ["curvature"])
        assert result.exit_code == 2

    def test_invalid_grid(self, runner):
        result = runner.invoke(cli, ["curvature", "--f", EXAMPLE_1, "--grid-n", "4"])
        assert result.exit_code == 2

    def test_web_not_in_general_position(self, runner):
        result = runner.invoke(cli, ["curvature", "--f", "x + y^2"])
        assert result.exit_code == 3

    def test_domain_error(self, runner):
        result = runner.invoke(cli, ["curvature", "--f", "log(x) + y", "--point", "0,1"])
        assert result.exit_code == 3


class TestFlatWeb:
    def test_analyze_reports_parallelizable(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(cli, ["analyze", "--f", PARALLEL, "--s0", "1", "--grid-n", "7",
                                     "--report-out", str(out)])
        assert result.exit_code == 0
        document = json.loads(out.read_text(encoding="utf-8"))["result"]
        assert document["verdict"] == "parallelizable"
        assert document["checks"]["verification"]["passed"] is True

    def test_integrate_dump(self, runner, tmp_path):
        dump = tmp_path / "grid.txt"
        result = runner.invoke(cli, ["integrate", "--f", PARALLEL, "--s0", "2", "--t0", "1/10",
                                     "--grid-n", "5", "--dump", str(dump)])
        assert result.exit_code == 0
        assert dump.read_text(encoding="utf-8").startswith("# web-linearize grid dump")

    def test_verify(self, runner):
        result = runner.invoke(cli, ["verify", "--f", PARALLEL, "--s0", "-1", "--grid-n", "7"])
        assert result.exit_code == 0
        assert "passed" in result.output
