"""Integration tests for denoising observed series from files"""

import json

import numpy as np
from click.testing import CliRunner

from src.wavecv.cli import cli
from src.wavecv.config import DenoiseOptions
from src.wavecv.harness import denoise_series
from src.wavecv.signals import NoiseSpec, noisy_signal, sample_points, test_function
from src.wavecv.wavelets import build_filter, dwt, idwt


def ip_like_series(seed: int = 0, sigma: float = 0.05) -> np.ndarray:
    """4096 samples of regular breathing with a disturbed stretch in the middle.

    Breathing lives in the scaling coefficients at level 8. Level 8 carries fine
    texture throughout, level 9 only over the middle quarter; both are 20 sigma
    strong. Levels 10 and 11 hold noise only.
    """
    rng = np.random.default_rng(seed)
    breathing = dwt(np.sin(2 * np.pi * 24 * sample_points(4096)), build_filter("la8"), 8)
    details = {level: np.zeros(2**level) for level in breathing.levels}
    details[8] = 20 * sigma * rng.standard_normal(256)
    details[9][192:320] = 20 * sigma * rng.standard_normal(128)
    signal = idwt(breathing.with_details(details))
    return signal + sigma * rng.standard_normal(signal.size)


class TestDenoisePipeline:
    """Generate a noisy series, write it, denoise it through the CLI."""

    def test_every_method_through_cli(self, tmp_path):
        truth = test_function("doppler", 700)
        y = noisy_signal(truth, NoiseSpec(family="lognormal", snr=5.0), np.random.default_rng(3))
        source = tmp_path / "observed.csv"
        source.write_text("# surrogate series\n" + "\n".join(f"{v:.10g}" for v in y) + "\n")

        runner = CliRunner()
        for method in ("ld_block", "block_cv", "ld_cv", "nason", "sureshrink", "visushrink_hard"):
            out = tmp_path / f"{method}.csv"
            diag = tmp_path / f"{method}.json"
            result = runner.invoke(
                cli,
                [
                    "denoise", "--in", str(source), "--out", str(out),
                    "--method", method, "--diagnostics", str(diag),
                ],
            )
            assert result.exit_code == 0, result.output
            estimate = np.loadtxt(out, delimiter=",", skiprows=1)[:, 2]
            assert estimate.size == 700
            assert np.mean((estimate - truth) ** 2) < np.mean((y - truth) ** 2)
            report = json.loads(diag.read_text())
            assert report["method"] == method
            assert report["n"] == 700 and report["padded_length"] == 1024

    def test_haar_soft_rule(self, tmp_path):
        source = tmp_path / "wave.txt"
        source.write_text("\n".join(str(v) for v in test_function("wave", 128)))
        result = CliRunner().invoke(
            cli,
            [
                "denoise", "--in", str(source), "--out", str(tmp_path / "o.csv"),
                "--method", "nason", "--filter", "haar", "--rule", "soft", "--j0-offset", "3",
            ],
        )
        assert result.exit_code == 0, result.output


class TestRealDataBands:
    """Share of detail coefficients kept on a breathing-trace surrogate."""

    def retained(self, method, y):
        return denoise_series(y, DenoiseOptions(method=method)).result.retained_fraction

    def test_nason_retains_a_small_share(self):
        assert 0.03 <= self.retained("nason", ip_like_series()) <= 0.12

    def test_ld_block_retains_its_band(self):
        assert 0.06 <= self.retained("ld_block", ip_like_series()) <= 0.20

    def test_ld_block_keeps_the_coarsest_level_whole(self):
        series = denoise_series(ip_like_series(1), DenoiseOptions(method="ld_block"))
        assert np.all(series.result.decomposition.details[8] != 0.0)
        assert series.j0 == 8
