"""Term-by-term and block threshold rules plus the classical baseline estimators.

All rules keep the scaling (coarse) coefficients untouched and act only on the
detail levels ``j0..J-1`` of a :class:`~wavecv.wavelets.WaveletDecomposition`.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt
import pywt
from scipy.stats import median_abs_deviation

from .exceptions import ConfigError, UsageError
from .wavelets import FloatArray, WaveletDecomposition

logger = logging.getLogger(__name__)

Rule = Literal["soft", "hard"]
Scale = Literal["amplitude", "sum_of_squares"]

# Phi^{-1}(3/4): MAD of a standard normal
MAD_NORMAL_CONSTANT = 0.6745


@dataclass(frozen=True)
class ThresholdProfile:
    """One threshold per detail level, tagged with the scale it is expressed on."""

    per_level: Mapping[int, float]
    scale: Scale = "amplitude"

    def __post_init__(self) -> None:
        if self.scale not in ("amplitude", "sum_of_squares"):
            raise ConfigError(f"Unknown threshold scale '{self.scale}'")
        cleaned = {int(j): float(v) for j, v in sorted(self.per_level.items())}
        negative = [j for j, v in cleaned.items() if not v >= 0.0]
        if negative:
            raise ConfigError(f"Thresholds must be nonnegative; levels {negative} are not")
        object.__setattr__(self, "per_level", cleaned)

    @classmethod
    def constant(cls, levels: Iterable[int], value: float, scale: Scale) -> ThresholdProfile:
        return cls({j: value for j in levels}, scale)

    @property
    def levels_covered(self) -> list[int]:
        return list(self.per_level)

    def __getitem__(self, level: int) -> float:
        return self.per_level[level]

    def updated(self, values: Mapping[int, float]) -> ThresholdProfile:
        """Copy with the thresholds of some levels replaced."""
        return ThresholdProfile({**self.per_level, **values}, self.scale)

    def standardized(self, block_size: int) -> dict[int, float]:
        """Sum-of-squares thresholds as per-coefficient amplitudes ``sqrt(lambda / L)``."""
        if self.scale == "amplitude":
            return dict(self.per_level)
        return {j: math.sqrt(v / block_size) for j, v in self.per_level.items()}

    def max_relative_change(self, other: ThresholdProfile) -> float:
        change = 0.0
        for j, value in self.per_level.items():
            previous = other.per_level.get(j, 0.0)
            denom = max(abs(previous), abs(value))
            if denom > 0.0:
                change = max(change, abs(value - previous) / denom)
        return change


BlockRange = tuple[int, int]


@dataclass(frozen=True)
class BlockPartition:
    """Contiguous blocks of (nominal) size ``L`` covering every detail level."""

    L: int
    ranges: dict[int, tuple[BlockRange, ...]] = field(default_factory=dict)

    def blocks(self, level: int) -> tuple[BlockRange, ...]:
        return self.ranges[level]


def _pywt_rule(c: npt.ArrayLike, lam: float, mode: str) -> npt.NDArray[np.float64] | float:
    values = np.asarray(c, dtype=np.float64)
    if lam <= 0.0:
        # both rules are the identity at zero; pywt soft would divide 0 by 0
        out = values.copy()
        return float(out) if out.ndim == 0 else out
    # PyWavelets rules expect at least one dimension
    out = pywt.threshold(np.atleast_1d(values), lam, mode=mode).reshape(values.shape)
    return float(out) if out.ndim == 0 else out


def soft_threshold(c: npt.ArrayLike, lam: float) -> npt.NDArray[np.float64] | float:
    """``sgn(c) * max(|c| - lam, 0)``, elementwise."""
    return _pywt_rule(c, lam, "soft")


def hard_threshold(c: npt.ArrayLike, lam: float) -> npt.NDArray[np.float64] | float:
    """Keep *c* where ``|c| > lam``, else 0. The boundary ``|c| == lam`` is killed."""
    # pywt keeps |c| >= value, so nudge the cut one ulp up
    return _pywt_rule(c, float(np.nextafter(lam, np.inf)), "hard")


def apply_rule(c: FloatArray, lam: float, rule: Rule) -> FloatArray:
    if rule == "soft":
        return np.asarray(soft_threshold(c, lam), dtype=np.float64)
    if rule == "hard":
        return np.asarray(hard_threshold(c, lam), dtype=np.float64)
    raise ConfigError(f"Unknown threshold rule '{rule}'; expected 'soft' or 'hard'")


def universal_threshold(sigma: float, n: int) -> float:
    """VisuShrink threshold ``sigma * sqrt(2 ln n)``."""
    return sigma * math.sqrt(2.0 * math.log(n))


def _zero_center(values: FloatArray, axis: int | None = 0, keepdims: bool = False) -> FloatArray:
    return np.zeros_like(np.median(values, axis=axis, keepdims=keepdims))


def estimate_sigma(d: WaveletDecomposition) -> float:
    """MAD of the finest-level detail coefficients divided by 0.6745."""
    finest = d.details[d.J - 1]
    # median of |d|, i.e. the MAD about zero
    mad = median_abs_deviation(finest, center=_zero_center)
    return float(mad / MAD_NORMAL_CONSTANT)


def sure_level_threshold(coeffs: npt.ArrayLike, sigma: float) -> float:
    """SURE-minimizing soft threshold for one level, on the amplitude scale.

    The risk ``m - 2 #{|x_k| <= t} + sum min(x_k^2, t^2)`` with ``x = c / sigma`` is
    evaluated at every candidate ``t`` in ``{0} U {|x_k|}``; ties go to the
    smaller threshold.
    """
    if sigma <= 0.0:
        return 0.0
    x = np.sort(np.abs(np.asarray(coeffs, dtype=np.float64)) / sigma)
    m = x.size
    if m == 0:
        return 0.0
    candidates = np.concatenate(([0.0], x))
    at_or_below = np.searchsorted(x, candidates, side="right")
    prefix = np.concatenate(([0.0], np.cumsum(x * x)))
    risk = m - 2.0 * at_or_below + prefix[at_or_below] + (m - at_or_below) * candidates**2
    best = int(np.argmin(risk))
    return float(candidates[best] * sigma)


def level_is_sparse(coeffs: npt.ArrayLike, sigma: npt.ArrayLike) -> bool:
    """HybridShrink sparsity test for one level of ``2**j`` coefficients.

    True when ``2^-j sum(d^2 / sigma^2 - 1) <= 2^(-j/2) * j^(3/2)``.
    """
    d = np.asarray(coeffs, dtype=np.float64)
    size = d.size
    if size < 1:
        raise UsageError("Sparsity test needs at least one coefficient")
    s = np.broadcast_to(np.asarray(sigma, dtype=np.float64), d.shape)
    lhs = float(np.mean(d * d / (s * s) - 1.0))
    log_size = math.log2(size)
    rhs = size**-0.5 * log_size**1.5
    return lhs <= rhs


def block_size_for(n: int) -> int:
    """Dyadic number closest to ``ln n`` (at least 2, ties broken upward)."""
    target = math.log(n)
    best, best_gap = 2, abs(2 - target)
    size = 4
    while size <= 2 * target + 2:
        gap = abs(size - target)
        if gap <= best_gap:
            best, best_gap = size, gap
        size *= 2
    return best


def make_block_partition(J: int, j0: int, n: int) -> BlockPartition:
    """Split each detail level ``j0..J-1`` into contiguous blocks of ``L`` coefficients.

    Levels shorter than ``L`` form a single block.
    """
    if n != 2**J:
        raise UsageError(f"Partition length n={n} does not equal 2**J={2**J}")
    block = block_size_for(n)
    ranges: dict[int, tuple[BlockRange, ...]] = {}
    for level in range(j0, J):
        size = 2**level
        ranges[level] = tuple((start, min(start + block, size)) for start in range(0, size, block))
    return BlockPartition(L=block, ranges=ranges)


def block_energies(coeffs: FloatArray, blocks: Sequence[BlockRange]) -> FloatArray:
    starts = np.fromiter((start for start, _ in blocks), dtype=np.intp, count=len(blocks))
    return np.add.reduceat(coeffs * coeffs, starts)


def block_project(
    coeffs: npt.ArrayLike,
    blocks: Sequence[BlockRange],
    lam: float,
    block_size: int | None = None,
) -> FloatArray:
    """Keep a block whole when its energy exceeds *lam*, otherwise zero it.

    *lam* is on the sum-of-squares scale. Blocks shorter than *block_size* are
    compared against ``lam * len / block_size``.
    """
    values = np.asarray(coeffs, dtype=np.float64)
    if not blocks:
        return values.copy()
    lengths = np.array([stop - start for start, stop in blocks], dtype=np.float64)
    nominal = float(block_size) if block_size else float(lengths.max())
    keep = block_energies(values, blocks) > lam * (lengths / nominal)
    return values * np.repeat(keep, lengths.astype(np.intp))


def apply_termwise(
    d: WaveletDecomposition, profile: ThresholdProfile, rule: Rule
) -> WaveletDecomposition:
    """Threshold every level in *profile* coefficient by coefficient."""
    details = dict(d.details)
    for level, lam in profile.per_level.items():
        details[level] = apply_rule(d.details[level], lam, rule)
    return d.with_details(details)


def apply_blockwise(
    d: WaveletDecomposition, profile: ThresholdProfile, partition: BlockPartition
) -> WaveletDecomposition:
    """Block projection of every level in *profile* using *partition*."""
    details = dict(d.details)
    for level, lam in profile.per_level.items():
        details[level] = block_project(d.details[level], partition.blocks(level), lam, partition.L)
    return d.with_details(details)


def visushrink_profile(d: WaveletDecomposition, sigma: float | None = None) -> ThresholdProfile:
    sigma = estimate_sigma(d) if sigma is None else sigma
    lam = universal_threshold(sigma, d.n)
    logger.debug("VisuShrink sigma=%.6g lambda=%.6g", sigma, lam)
    return ThresholdProfile.constant(d.levels, lam, "amplitude")


def visushrink(d: WaveletDecomposition, mode: Rule = "hard") -> WaveletDecomposition:
    """Universal threshold applied termwise to every detail level."""
    return apply_termwise(d, visushrink_profile(d), mode)


def sure_profile(
    d: WaveletDecomposition, hybrid: bool = False, sigma: float | None = None
) -> ThresholdProfile:
    """Per-level SURE thresholds; with *hybrid*, sparse levels get the universal threshold.

    The universal threshold on a sparse level is ``sigma * sqrt(2 ln n)`` with ``n``
    the series length, the same value VisuShrink uses.
    """
    sigma = estimate_sigma(d) if sigma is None else sigma
    if sigma <= 0.0:
        return ThresholdProfile.constant(d.levels, 0.0, "amplitude")
    per_level: dict[int, float] = {}
    for level in d.levels:
        coeffs = d.details[level]
        if hybrid and level_is_sparse(coeffs, sigma):
            per_level[level] = universal_threshold(sigma, d.n)
        else:
            per_level[level] = sure_level_threshold(coeffs, sigma)
    return ThresholdProfile(per_level, "amplitude")


def sureshrink(d: WaveletDecomposition) -> WaveletDecomposition:
    """Level-dependent SURE thresholds, soft rule."""
    return apply_termwise(d, sure_profile(d), "soft")


def hybridshrink(d: WaveletDecomposition) -> WaveletDecomposition:
    """SureShrink with the universal threshold on levels the sparsity test flags."""
    return apply_termwise(d, sure_profile(d, hybrid=True), "soft")
