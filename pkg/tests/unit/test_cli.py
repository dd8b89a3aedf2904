"""Unit tests for the CLI module"""

import csv
import io
import json

import numpy as np
from click.testing import CliRunner

from src.wavecv.cli import cli


class TestCLI:
    """Test the CLI interface."""

    def setup_method(self):
        """Set up test fixtures."""
        self.runner = CliRunner()

    def test_cli_help(self):
        result = self.runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        assert "Wavelet denoising" in result.output
        for command in ("simulate", "denoise", "gen-signals", "example-config"):
            assert command in result.output

    def test_unknown_flag(self):
        """Usage errors exit with code 2."""
        result = self.runner.invoke(cli, ["gen-signals", "--bogus"])
        assert result.exit_code == 2

    def test_gen_signals_rows(self):
        """wave at n=512 gives a header and 512 rows."""
        result = self.runner.invoke(cli, ["gen-signals", "--function", "wave", "--n", "512"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "x,f,y"
        assert len(lines) == 513
        x, f, y = (float(v) for v in lines[-1].split(","))
        assert x == 1.0 and f == y

    def test_gen_signals_is_readable_csv(self, tmp_path):
        """The series file round-trips through a csv reader with named columns."""
        out = tmp_path / "signal.csv"
        args = ["gen-signals", "--function", "blip", "--n", "64", "--out", str(out)]
        result = self.runner.invoke(cli, args)
        assert result.exit_code == 0, result.output
        rows = list(csv.DictReader(io.StringIO(out.read_text(encoding="utf-8"))))
        assert len(rows) == 64
        assert set(rows[0]) == {"x", "f", "y"}
        assert float(rows[0]["x"]) == 1 / 64
        assert all(float(row["f"]) == float(row["y"]) for row in rows)

    def test_gen_signals_with_noise(self, tmp_path):
        out = tmp_path / "noisy.csv"
        args = ["gen-signals", "--function", "bumps", "--n", "64", "--noise", "t3", "--snr", "3"]
        result = self.runner.invoke(cli, [*args, "--seed", "4", "--out", str(out)])
        assert result.exit_code == 0
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert data.shape == (64, 3)
        snr = np.std(data[:, 1]) / np.std(data[:, 2] - data[:, 1])
        assert abs(snr - 3.0) < 1e-6

    def test_gen_signals_cauchy_with_snr(self):
        args = ["gen-signals", "--function", "wave", "--n", "64", "--noise", "cauchy", "--snr", "3"]
        result = self.runner.invoke(cli, args)
        assert result.exit_code == 1
        assert "Error:" in result.stderr

    def test_gen_signals_snr_without_noise(self):
        args = ["gen-signals", "--function", "wave", "--n", "64", "--snr", "3"]
        result = self.runner.invoke(cli, args)
        assert result.exit_code == 1
        assert "--snr needs --noise" in result.stderr

    def test_denoise_non_dyadic_input(self, tmp_path, rng):
        source = tmp_path / "series.txt"
        values = np.sin(np.linspace(0.0, 6.0, 300)) + 0.3 * rng.standard_t(3.0, 300)
        source.write_text("value\n" + "\n".join(f"{v:.8f}" for v in values) + "\n")
        out = tmp_path / "denoised.csv"
        diagnostics = tmp_path / "diag.json"
        result = self.runner.invoke(
            cli,
            ["denoise", "--in", str(source), "--out", str(out), "--diagnostics", str(diagnostics)],
        )
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert lines[0] == "index,y,estimate"
        assert len(lines) == 301
        report = json.loads(diagnostics.read_text())
        assert report["method"] == "ld_block"
        assert report["padded_length"] == 512
        assert 0.0 <= report["retained_percent"] <= 100.0

    def test_denoise_bad_row(self, tmp_path):
        source = tmp_path / "series.txt"
        source.write_text("1.0\n2.0\nthree\n")
        result = self.runner.invoke(
            cli, ["denoise", "--in", str(source), "--out", str(tmp_path / "out.csv")]
        )
        assert result.exit_code == 1
        assert "line 3" in result.stderr

    def test_denoise_missing_file(self, tmp_path):
        result = self.runner.invoke(
            cli, ["denoise", "--in", str(tmp_path / "none.txt"), "--out", str(tmp_path / "o.csv")]
        )
        assert result.exit_code == 1
        assert result.stderr.startswith("Error:")

    def test_denoise_unknown_method(self, tmp_path):
        result = self.runner.invoke(
            cli, ["denoise", "--in", "x", "--out", "y", "--method", "wiener"]
        )
        assert result.exit_code == 2

    def test_simulate(self, tmp_path, write_config, small_config_text):
        out = tmp_path / "table.csv"
        config = write_config(small_config_text)
        result = self.runner.invoke(
            cli, ["simulate", "--config", str(config), "--out", str(out), "--quiet"]
        )
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert lines[0].startswith("function,n,snr,noise,method,mean_mse")
        assert len(lines) == 1 + 2 * 2

    def test_simulate_summary(self, tmp_path, write_config, small_config_text):
        config = write_config(small_config_text)
        out = tmp_path / "t.md"
        args = ["simulate", "--config", str(config), "--out", str(out), "--format", "markdown"]
        result = self.runner.invoke(cli, args)
        assert result.exit_code == 0, result.output
        assert result.stdout.strip()
        assert out.read_text().startswith("| function |")

    def test_simulate_bad_config(self, write_config, tmp_path):
        config = write_config("reps = 1\n")
        result = self.runner.invoke(
            cli, ["simulate", "--config", str(config), "--out", str(tmp_path / "t.csv")]
        )
        assert result.exit_code == 1
        assert "reps" in result.stderr

    def test_example_config_loads(self, tmp_path):
        from src.wavecv.config import load_simulation_config

        out = tmp_path / "table1.toml"
        result = self.runner.invoke(cli, ["example-config", "--out", str(out)])
        assert result.exit_code == 0
        cfg = load_simulation_config(out)
        assert cfg.noise_families == ["t3"]
        assert "ld_block" in cfg.methods and "visushrink_hard" in cfg.methods
