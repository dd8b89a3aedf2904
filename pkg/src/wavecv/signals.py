"""Test functions, noise synthesis, SNR scaling and error metrics.

The eight test functions are the Donoho-Johnstone set (Blocks, Bumps, Doppler,
Heavisine) and the Marron et al. set (Blip, Corner, Spikes, Wave), sampled at
``x_i = i / n`` for ``i = 1..n``.
"""

from __future__ import annotations

import hashlib
import logging
import math
from collections.abc import Callable
from typing import Literal, get_args

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, model_validator

from .exceptions import ConfigError, UsageError
from .wavelets import FloatArray

logger = logging.getLogger(__name__)

TestFunctionId = Literal[
    "blip", "blocks", "bumps", "corner", "doppler", "heavisine", "spikes", "wave"
]
NoiseFamily = Literal["normal", "t3", "lognormal", "cauchy"]

TEST_FUNCTIONS: tuple[str, ...] = get_args(TestFunctionId)
NOISE_FAMILIES: tuple[str, ...] = get_args(NoiseFamily)

# Mean of a standard lognormal, exp(1/2)
_LOGNORMAL_MEAN = math.exp(0.5)

_BUMP_POSITIONS = np.array([0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81])
_BLOCK_HEIGHTS = np.array([4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2])
_BUMP_HEIGHTS = np.array([4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2])
_BUMP_WIDTHS = np.array(
    [0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005]
)


def _blip(x: FloatArray) -> FloatArray:
    left = 0.32 + 0.6 * x + 0.3 * np.exp(-100.0 * (x - 0.3) ** 2)
    right = -0.28 + 0.6 * x + 0.3 * np.exp(-100.0 * (x - 1.3) ** 2)
    return np.where(x <= 0.8, left, right)


def _blocks(x: FloatArray) -> FloatArray:
    steps = (1.0 + np.sign(x[:, None] - _BUMP_POSITIONS[None, :])) / 2.0
    return steps @ _BLOCK_HEIGHTS


def _bumps(x: FloatArray) -> FloatArray:
    scaled = np.abs((x[:, None] - _BUMP_POSITIONS[None, :]) / _BUMP_WIDTHS[None, :])
    return (1.0 + scaled) ** -4 @ _BUMP_HEIGHTS


def _corner(x: FloatArray) -> FloatArray:
    return np.select(
        [x <= 0.5, x <= 0.8],
        [623.87 * x**3 * (1.0 - 2.0 * x), 187.161 * (0.125 - x**3) * x**4],
        default=3708.470441 * (x - 1.0) ** 3,
    )


def _doppler(x: FloatArray) -> FloatArray:
    return np.sqrt(x * (1.0 - x)) * np.sin(2.0 * np.pi * 1.05 / (x + 0.05))


def _heavisine(x: FloatArray) -> FloatArray:
    return 4.0 * np.sin(4.0 * np.pi * x) - np.sign(x - 0.3) - np.sign(0.72 - x)


def _spikes(x: FloatArray) -> FloatArray:
    return 15.6676 * (
        np.exp(-500.0 * (x - 0.23) ** 2)
        + 2.0 * np.exp(-2000.0 * (x - 0.33) ** 2)
        + 4.0 * np.exp(-8000.0 * (x - 0.47) ** 2)
        + 3.0 * np.exp(-16000.0 * (x - 0.69) ** 2)
        + np.exp(-32000.0 * (x - 0.83) ** 2)
    )


def _wave(x: FloatArray) -> FloatArray:
    return 0.5 + 0.2 * np.cos(4.0 * np.pi * x) + 0.1 * np.cos(24.0 * np.pi * x)


_GENERATORS: dict[str, Callable[[FloatArray], FloatArray]] = {
    "blip": _blip,
    "blocks": _blocks,
    "bumps": _bumps,
    "corner": _corner,
    "doppler": _doppler,
    "heavisine": _heavisine,
    "spikes": _spikes,
    "wave": _wave,
}


def sample_points(n: int) -> FloatArray:
    """Design points ``i / n`` for ``i = 1..n``."""
    return np.arange(1, n + 1, dtype=np.float64) / n


def test_function(function_id: str, n: int) -> FloatArray:
    """Sample a test function at ``x_i = i / n``.

    Raises:
        ConfigError: for an unknown function id or ``n < 8``.
    """
    key = function_id.lower().strip()
    generator = _GENERATORS.get(key)
    if generator is None:
        raise ConfigError(
            f"Unknown test function '{function_id}'; expected one of {', '.join(TEST_FUNCTIONS)}"
        )
    if n < 8:
        raise ConfigError(f"Test functions need n >= 8, got {n}")
    return generator(sample_points(n))


# pytest would otherwise try to collect the public name as a test
test_function.__test__ = False  # type: ignore[attr-defined]


class NoiseSpec(BaseModel):
    """Noise family, target SNR and RNG seed for one noisy realization."""

    model_config = ConfigDict(frozen=True)

    family: NoiseFamily
    snr: float | None = None
    seed: int = 0

    @model_validator(mode="after")
    def _check_snr(self) -> NoiseSpec:
        if self.family == "cauchy":
            if self.snr is not None:
                raise ValueError("SNR is undefined for infinite-variance Cauchy noise")
        elif self.snr is not None and not self.snr > 0:
            raise ValueError(f"SNR must be positive, got {self.snr}")
        return self


def sample_noise(spec: NoiseSpec, n: int, rng: np.random.Generator) -> FloatArray:
    """Draw *n* iid raw noise values of ``spec.family``.

    Lognormal draws are centred at the distribution mean; no scaling is applied.
    """
    match spec.family:
        case "normal":
            return rng.standard_normal(n)
        case "t3":
            return rng.standard_t(3.0, n)
        case "lognormal":
            return rng.lognormal(0.0, 1.0, n) - _LOGNORMAL_MEAN
        case "cauchy":
            return rng.standard_cauchy(n)
    raise ConfigError(f"Unknown noise family '{spec.family}'")


def scale_to_snr(f: npt.ArrayLike, noise: npt.ArrayLike, snr: float) -> FloatArray:
    """Add *noise* to *f* rescaled so that ``sd(f) / sd(scaled noise) == snr``.

    Standard deviations are population sds of the realized vectors.

    Raises:
        ConfigError: when either vector has zero variance or ``snr <= 0``.
    """
    signal = np.asarray(f, dtype=np.float64)
    raw = np.asarray(noise, dtype=np.float64)
    if not snr > 0:
        raise ConfigError(f"SNR must be positive, got {snr}")
    signal_sd = float(np.std(signal))
    noise_sd = float(np.std(raw))
    if signal_sd == 0.0 or noise_sd == 0.0:
        raise ConfigError("Cannot scale to an SNR when the signal or the noise has zero variance")
    return signal + raw * (signal_sd / (snr * noise_sd))


def noisy_signal(f: FloatArray, spec: NoiseSpec, rng: np.random.Generator) -> FloatArray:
    """Truth plus noise drawn from *spec*, SNR-scaled when the family allows it."""
    raw = sample_noise(spec, f.size, rng)
    if spec.snr is None:
        return f + raw
    return scale_to_snr(f, raw, spec.snr)


def mse(estimate: npt.ArrayLike, truth: npt.ArrayLike) -> float:
    """Mean squared error ``(1/n) sum (estimate_i - truth_i)^2``.

    Raises:
        UsageError: for vectors of different length.
    """
    a = np.asarray(estimate, dtype=np.float64)
    b = np.asarray(truth, dtype=np.float64)
    if a.shape != b.shape:
        raise UsageError(f"Length mismatch: estimate {a.shape} vs truth {b.shape}")
    return float(np.mean((a - b) ** 2))


def stream_key(*parts: object) -> int:
    """Stable 64-bit key for a tuple of labels, independent of ``PYTHONHASHSEED``."""
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def substream(master_seed: int, key: int, index: int) -> np.random.Generator:
    """Independent generator for repetition *index* of the stream labelled *key*."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, key, index]))
