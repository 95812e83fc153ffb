"""
Tests for the command-line entry point
"""

import json

import pytest

import app
from experiments.config import load_config
from laurent_lab.errors import ConfigError
from scripts.generate_config import generate_config_text


def write_config(tmp_path, text):
    path = tmp_path / "run.env"
    path.write_text(text)
    return str(path)


class TestSettings:
    """Test cases for runtime settings"""

    def test_log_level_from_environment(self, monkeypatch):
        """LAURENT_LAB_LOG_LEVEL is read and upper-cased"""
        monkeypatch.setenv("LAURENT_LAB_LOG_LEVEL", "debug")
        assert app.get_runtime_settings()["log_level"] == "DEBUG"

    def test_default_log_level(self, monkeypatch):
        """INFO when nothing is configured"""
        monkeypatch.delenv("LAURENT_LAB_LOG_LEVEL", raising=False)
        assert app.get_runtime_settings()["log_level"] == "INFO"

    def test_unknown_log_level(self):
        """Unknown level names are configuration errors"""
        with pytest.raises(ConfigError):
            app.configure_logging("LOUD")


class TestMain:
    """Test cases for subcommands and exit codes"""

    def test_boyd_run(self, tmp_path):
        """A small Boyd table exits 0 and writes CSV"""
        config = write_config(
            tmp_path, "SPACES=lebesgue(2)\nJ_MAX=16\nBOYD_BUDGET=256\n"
        )
        out = tmp_path / "boyd.csv"
        code = app.main(["boyd", "--config", config, "--out", str(out)])
        assert code == app.EXIT_OK
        header = out.read_text().split("\r\n")[0]
        assert header.startswith("space,alpha,alpha_method,beta")

    def test_json_to_stdout(self, tmp_path, capsys):
        """Reports go to stdout when no path is given"""
        config = write_config(
            tmp_path, "SPACES=lebesgue(3)\nJ_MAX=16\nBOYD_BUDGET=256\n"
        )
        code = app.main(["boyd", "--config", config, "--format", "json"])
        assert code == app.EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert json.loads(lines[0])["report"] == "boyd"
        assert json.loads(lines[1])["space"] == "lebesgue(3)"

    def test_bad_symbol_literal(self, tmp_path):
        """Malformed literals exit with code 2"""
        out = tmp_path / "fejer.csv"
        code = app.main(["fejer", "--symbol", "triangle(1)", "--out", str(out)])
        assert code == app.EXIT_CONFIG
        assert not out.exists()

    def test_unknown_config_key(self, tmp_path):
        """Unknown config keys exit with code 2"""
        config = write_config(tmp_path, "COLOUR=blue\n")
        assert app.main(["verify", "--config", config]) == app.EXIT_CONFIG

    def test_bad_log_level(self):
        """An unknown --log-level exits with code 2"""
        assert app.main(["boyd", "--log-level", "LOUD"]) == app.EXIT_CONFIG

    def test_out_of_domain_parameter(self, tmp_path):
        """Domain errors exit with code 2"""
        config = write_config(tmp_path, "SPACES=lebesgue(0.5)\nJ_MAX=16\n")
        assert app.main(["boyd", "--config", config]) == app.EXIT_CONFIG

    def test_calibrate_writes_record(self, tmp_path):
        """calibrate saves a JSON record keyed by space label"""
        config = write_config(
            tmp_path,
            "SPACES=lebesgue(2)\nFIXTURES=const(1)\nN_SCHEDULE=4\n"
            "RESTARTS=1\nITERATIONS=5\n",
        )
        record = tmp_path / "calibration.json"
        out = tmp_path / "calibrate.csv"
        code = app.main(
            [
                "calibrate",
                "--config",
                config,
                "--calibration",
                str(record),
                "--out",
                str(out),
            ]
        )
        assert code == app.EXIT_OK
        payload = json.loads(record.read_text())
        assert payload["lebesgue(2)"]["constant"] == pytest.approx(1.0)

    def test_missing_subcommand(self):
        """argparse rejects a call without a subcommand"""
        with pytest.raises(SystemExit):
            app.main([])


class TestGenerateConfig:
    """Test cases for the config generator script"""

    def test_generated_file_loads(self, tmp_path):
        """Generated text is a valid config for the same subcommand"""
        text = generate_config_text("weights")
        assert text.startswith("# Laurent Lab experiment configuration (weights)")
        path = write_config(tmp_path, text)
        config = load_config(path)
        assert config.kind == "weights"
        assert config.budgets == [256, 512, 1024, 2048, 4096]


if __name__ == "__main__":
    pytest.main([__file__])
