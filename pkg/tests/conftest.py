"""Test configuration and fixtures."""

from pathlib import Path

import numpy as np
import pytest

from src.wavecv.config import SearchConfig
from src.wavecv.signals import NoiseSpec, noisy_signal, test_function
from src.wavecv.wavelets import build_filter


@pytest.fixture()
def rng():
    """Seeded generator so random inputs are the same on every run."""
    return np.random.default_rng(20240101)


@pytest.fixture()
def haar():
    return build_filter("haar")


@pytest.fixture()
def la8():
    return build_filter("la8")


@pytest.fixture()
def fast_search():
    """Coarse optimizer settings that keep CV tests quick."""
    return SearchConfig(grid_points=16, refine_rounds=1, max_outer_iters=2)


@pytest.fixture()
def noisy_heavisine():
    """Heavisine, n=512, t3 noise at SNR 5 together with its truth."""
    truth = test_function("heavisine", 512)
    spec = NoiseSpec(family="t3", snr=5.0, seed=7)
    y = noisy_signal(truth, spec, np.random.default_rng(spec.seed))
    return truth, y


@pytest.fixture()
def write_config(tmp_path: Path):
    """Write flat TOML text to a temporary config file and return its path."""

    def _write(text: str, name: str = "sim.toml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture()
def small_config_text():
    """Two-cell simulation that runs in well under a second per cell."""
    return "\n".join(
        [
            'functions = ["wave"]',
            "sizes = [64]",
            "snrs = [3.0, 5.0]",
            'noise_families = ["t3"]',
            'methods = ["nason", "visushrink_hard"]',
            "reps = 3",
            'filter = "haar"',
            "master_seed = 11",
            "grid_points = 16",
            "refine_rounds = 1",
            "max_outer_iters = 2",
            "",
        ]
    )
