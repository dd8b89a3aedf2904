"""Even-odd cross-validated threshold selection.

The series is split into its even- and odd-indexed halves; each half is
denoised with a candidate threshold profile and scored against the other
half. Two estimators are built on that statistic:

* Nason's global term-by-term method (data-vs-reconstruction terms only,
  one threshold, square-root sample-size correction), and
* the level-dependent block estimator (LD Block): block keep-or-kill with one
  threshold per level, an extra reconstruction-agreement term, a peeling
  cascade followed by coordinate-wise refinement, and a per-level
  sample-size correction.

Half-length decompositions carry as many detail levels as the full data
(``j0_half = j0 - 1``) and are aligned from the finest level: half level
``J - 2 - m`` supplies the threshold for full level ``J - 1 - m``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt

from .config import SearchConfig
from .exceptions import ConfigError, SignalLengthError, UsageError
from .models import DenoiseResult
from .thresholding import (
    BlockPartition,
    Rule,
    ThresholdProfile,
    apply_blockwise,
    apply_termwise,
    block_energies,
    make_block_partition,
)
from .utils import performance_monitor
from .wavelets import FilterBank, FloatArray, WaveletDecomposition, dwt, dyadic_power, idwt

logger = logging.getLogger(__name__)

Mode = Literal["term_by_term", "block"]
Direction = Literal["forward", "backward"]
Objective = Callable[["CvContext", ThresholdProfile], float]
UpdateObserver = Callable[[int, float, float], None]


def split_even_odd(y: npt.ArrayLike) -> tuple[FloatArray, FloatArray]:
    """Split into ``(y_2, y_4, ..., y_n)`` and ``(y_1, y_3, ..., y_{n-1})`` (1-indexed).

    Raises:
        SignalLengthError: unless ``n`` is a power of two and at least 4.
    """
    values = np.asarray(y, dtype=np.float64)
    if values.ndim != 1 or values.size < 4:
        raise SignalLengthError(f"Even-odd split needs at least 4 samples, got {values.size}")
    dyadic_power(values.size)
    return values[1::2].copy(), values[0::2].copy()


def interleave(even: npt.ArrayLike, odd: npt.ArrayLike) -> FloatArray:
    """Inverse of :func:`split_even_odd`."""
    e = np.asarray(even, dtype=np.float64)
    o = np.asarray(odd, dtype=np.float64)
    if e.shape != o.shape:
        raise UsageError(f"Halves differ in length: {e.size} vs {o.size}")
    out = np.empty(2 * e.size, dtype=np.float64)
    out[0::2] = o
    out[1::2] = e
    return out


def interpolate_half(r: npt.ArrayLike, direction: Direction = "forward") -> FloatArray:
    """Adjacent-pair average with periodic wrap.

    ``forward`` gives ``(r_j + r_{j+1}) / 2``, which moves an odd-half series
    onto even sample positions; ``backward`` gives ``(r_{j-1} + r_j) / 2``,
    moving an even-half series onto odd positions.
    """
    values = np.asarray(r, dtype=np.float64)
    if values.size < 2:
        raise SignalLengthError("Interpolation needs at least 2 samples")
    shift = -1 if direction == "forward" else 1
    return 0.5 * (values + np.roll(values, shift))


@dataclass(frozen=True, eq=False)
class CvContext:
    """Both halves of a series, their decompositions and the half-length partition."""

    y_even: FloatArray
    y_odd: FloatArray
    d_even: WaveletDecomposition
    d_odd: WaveletDecomposition
    partition: BlockPartition
    mode: Mode = "block"
    rule: Rule = "hard"
    agreement_term: bool = True

    @classmethod
    def build(
        cls,
        y: npt.ArrayLike,
        bank: FilterBank,
        j0: int,
        mode: Mode = "block",
        rule: Rule = "hard",
        agreement_term: bool = True,
    ) -> CvContext:
        y_even, y_odd = split_even_odd(y)
        half_j = dyadic_power(y_even.size)
        half_j0 = half_j0_for(j0, half_j)
        return cls(
            y_even=y_even,
            y_odd=y_odd,
            d_even=dwt(y_even, bank, half_j0),
            d_odd=dwt(y_odd, bank, half_j0),
            partition=make_block_partition(half_j, half_j0, y_even.size),
            mode=mode,
            rule=rule,
            agreement_term=agreement_term,
        )

    @property
    def levels(self) -> list[int]:
        return list(self.d_even.levels)

    @property
    def scale(self) -> Literal["amplitude", "sum_of_squares"]:
        return "sum_of_squares" if self.mode == "block" else "amplitude"

    def threshold(self, d: WaveletDecomposition, profile: ThresholdProfile) -> WaveletDecomposition:
        if self.mode == "block":
            return apply_blockwise(d, profile, self.partition)
        return apply_termwise(d, profile, self.rule)

    def reconstructions(self, profile: ThresholdProfile) -> tuple[FloatArray, FloatArray]:
        """``(f_even, f_odd)`` denoised with *profile*."""
        return idwt(self.threshold(self.d_even, profile)), idwt(self.threshold(self.d_odd, profile))

    @property
    def keep_or_kill(self) -> bool:
        """True when every coefficient is either kept unchanged or zeroed."""
        return self.mode == "block" or self.rule == "hard"

    def decision_values(self, level: int) -> FloatArray:
        """What a threshold on *level* is compared against, over both halves."""
        partition = self.partition if self.mode == "block" else None
        return np.concatenate(
            [decision_values(d.details[level], partition, level) for d in (self.d_even, self.d_odd)]
        )

    def breakpoints(self, levels: Iterable[int]) -> FloatArray:
        """Sorted thresholds at which some keep-or-kill decision on *levels* flips."""
        return np.unique(np.concatenate([self.decision_values(level) for level in levels]))

    def kill_threshold(self, level: int) -> float:
        """Smallest threshold that zeroes *level* in both halves."""
        return float(self.decision_values(level).max())


def decision_values(
    coeffs: FloatArray, partition: BlockPartition | None, level: int
) -> FloatArray:
    """Per-block energies rescaled to a full block, or coefficient magnitudes.

    A block survives :func:`~wavecv.thresholding.block_project` exactly when its
    value here exceeds the threshold, and so does a coefficient under the hard rule.
    """
    if partition is None:
        return np.abs(coeffs)
    blocks = partition.blocks(level)
    lengths = np.array([stop - start for start, stop in blocks], dtype=np.float64)
    return block_energies(coeffs, blocks) * (partition.L / lengths)


def half_j0_for(j0: int, half_j: int) -> int:
    return min(max(j0 - 1, 0), max(half_j - 1, 0))


def cv_objective(ctx: CvContext, profile: ThresholdProfile) -> float:
    """Cross-validation score of *profile* on the two halves.

    ``1/2 (|f_odd~ - y_even|^2 + |f_even~ - y_odd|^2)
    + 1/4 (|f_odd~ - f_even|^2 + |f_even~ - f_odd|^2)``,
    where ``~`` is half-step interpolation onto the other half's positions.
    Swapping the halves leaves the score unchanged. The second bracket is the
    agreement term and is dropped when ``ctx.agreement_term`` is false.
    """
    f_even, f_odd = ctx.reconstructions(profile)
    odd_at_even = interpolate_half(f_odd, "forward")
    even_at_odd = interpolate_half(f_even, "backward")
    score = 0.5 * (
        float(np.sum((odd_at_even - ctx.y_even) ** 2))
        + float(np.sum((even_at_odd - ctx.y_odd) ** 2))
    )
    if ctx.agreement_term:
        score += 0.25 * (
            float(np.sum((odd_at_even - f_even) ** 2))
            + float(np.sum((even_at_odd - f_odd) ** 2))
        )
    return score


def search_range(ctx: CvContext, levels: Iterable[int]) -> float:
    """Upper end of the search interval for *levels*.

    Block mode: largest block energy in either half (short blocks rescaled to a
    full block). Term-by-term: largest coefficient magnitude. At this value every
    searched level is zeroed.
    """
    return max((ctx.kill_threshold(level) for level in levels), default=0.0)


@dataclass
class _Incumbent:
    lam: float
    value: float

    def offer(self, lam: float, value: float) -> None:
        if value < self.value or (value == self.value and lam < self.lam):
            self.lam, self.value = lam, value


def _grid_search(
    evaluate: Callable[[float], float],
    range_hi: float,
    cfg: SearchConfig,
    breakpoints: FloatArray | None = None,
) -> _Incumbent:
    best = _Incumbent(0.0, evaluate(0.0))
    if range_hi <= 0.0:
        return best
    if breakpoints is not None:
        # piecewise constant between breakpoints; each plateau starts at one
        for lam in breakpoints[(breakpoints > 0.0) & (breakpoints <= range_hi)]:
            best.offer(float(lam), evaluate(float(lam)))
        return best
    lo, hi = 0.0, range_hi
    for _ in range(cfg.refine_rounds + 1):
        grid = np.linspace(lo, hi, cfg.grid_points)
        for lam in grid[1:] if lo == 0.0 else grid:
            best.offer(float(lam), evaluate(float(lam)))
        step = (hi - lo) / (cfg.grid_points - 1)
        lo, hi = max(best.lam - step, 0.0), min(best.lam + step, range_hi)
    return best


def search_threshold(
    ctx: CvContext,
    levels: Iterable[int],
    fixed: ThresholdProfile,
    range_hi: float,
    cfg: SearchConfig,
    objective: Objective = cv_objective,
) -> float:
    """Single threshold for all *levels* minimizing *objective*, other levels from *fixed*.

    Grid search over ``[0, range_hi]`` followed by ``cfg.refine_rounds`` finer
    grids around the incumbent; ties resolve to the smallest threshold.

    The built-in score on a keep-or-kill context only changes where a block
    energy (or a coefficient magnitude) is crossed, so there it is evaluated at
    exactly those breakpoints instead, as long as there are at most
    ``cfg.max_breakpoints`` of them. That search is exact.

    Raises:
        UsageError: if *levels* is empty.
    """
    return _search(ctx, levels, fixed, range_hi, cfg, objective).lam


def _exact_breakpoints(
    ctx: CvContext, levels: list[int], cfg: SearchConfig, objective: Objective
) -> FloatArray | None:
    if objective is not cv_objective or not ctx.keep_or_kill:
        return None
    points = ctx.breakpoints(levels)
    return points if points.size <= cfg.max_breakpoints else None


def _search(
    ctx: CvContext,
    levels: Iterable[int],
    fixed: ThresholdProfile,
    range_hi: float,
    cfg: SearchConfig,
    objective: Objective,
) -> _Incumbent:
    searched = list(levels)
    if not searched:
        raise UsageError("Threshold search needs at least one level")

    def evaluate(lam: float) -> float:
        return objective(ctx, fixed.updated({j: lam for j in searched}))

    breakpoints = _exact_breakpoints(ctx, searched, cfg, objective)
    best = _grid_search(evaluate, range_hi, cfg, breakpoints)
    logger.debug(
        "Searched levels %s over [0, %.6g] (%s): lambda=%.6g objective=%.6g",
        searched,
        range_hi,
        "grid" if breakpoints is None else f"{breakpoints.size} breakpoints",
        best.lam,
        best.value,
    )
    return best


def initial_cascade(
    ctx: CvContext, cfg: SearchConfig, objective: Objective = cv_objective
) -> ThresholdProfile:
    """Level-dependent starting profile by peeling from the finest level down.

    A single threshold is first searched jointly over every level and kept for
    the finest one; the search is then repeated over the remaining coarser
    levels, fixing one more level each time, until the coarsest is searched
    alone.
    """
    levels = ctx.levels
    profile = ThresholdProfile.constant(levels, 0.0, ctx.scale)
    for top in reversed(levels):
        searched = [j for j in levels if j <= top]
        lam = search_threshold(ctx, searched, profile, search_range(ctx, searched), cfg, objective)
        profile = profile.updated({j: lam for j in searched})
    return profile


@dataclass
class RefineResult:
    profile: ThresholdProfile
    objective_trace: list[float] = field(default_factory=list)
    sweeps: int = 0


def coordinate_refine(
    ctx: CvContext,
    profile: ThresholdProfile,
    cfg: SearchConfig,
    objective: Objective = cv_objective,
    on_update: UpdateObserver | None = None,
) -> RefineResult:
    """Re-optimize one level at a time, finest to coarsest, until the profile settles.

    A level's threshold only changes when the search finds a strictly lower
    objective, so the objective never increases. *on_update* receives
    ``(level, objective_before, objective_after)`` for every coordinate step.
    """
    current = objective(ctx, profile)
    result = RefineResult(profile=profile, objective_trace=[current])
    for sweep in range(1, cfg.max_outer_iters + 1):
        previous = result.profile
        for level in reversed(ctx.levels):
            before = current
            best = _search(
                ctx, [level], result.profile, search_range(ctx, [level]), cfg, objective
            )
            if best.value < current:
                result.profile = result.profile.updated({level: best.lam})
                current = best.value
            if on_update is not None:
                on_update(level, before, current)
        result.objective_trace.append(current)
        result.sweeps = sweep
        change = result.profile.max_relative_change(previous)
        logger.debug("Refinement sweep %d: objective=%.6g change=%.3g", sweep, current, change)
        if change < cfg.convergence_tol:
            break
    return result


def nason_correction(lam: float, n: int) -> float:
    """Scale a threshold found on ``n/2`` points to ``n`` points.

    ``(1 - log 2 / log n)^(-1/2) * lam``.

    Raises:
        ConfigError: for ``n <= 2``.
    """
    if n <= 2:
        raise ConfigError(f"Sample-size correction is undefined for n={n}")
    return lam * (1.0 - math.log(2.0) / math.log(n)) ** -0.5


def _level_factor(level: int, exponent: float) -> float:
    # Full-data level l is the j-th highest with n / 2^j = 2^l points.
    points = 2**level
    if points <= 2:
        raise ConfigError(
            f"Level-dependent correction is undefined at level {level} ({points} points); "
            "use a coarsest level j0 >= 2"
        )
    return (1.0 - math.log(2.0) / math.log(points)) ** exponent


def ld_correction(profile: ThresholdProfile, n: int) -> ThresholdProfile:
    """Per-level sample-size correction of a full-data sum-of-squares profile.

    The ``j``-th highest level (``j = 1`` finest) is multiplied by
    ``(1 - log 2 / log(n / 2^j))^(-1)``.

    Raises:
        ConfigError: when a level has ``n / 2^j <= 2``.
    """
    big_j = dyadic_power(n)
    corrected: dict[int, float] = {}
    for level, lam in profile.per_level.items():
        if not 0 <= level < big_j:
            raise ConfigError(f"Level {level} is outside a length-{n} decomposition")
        corrected[level] = lam * _level_factor(level, -1.0)
    return ThresholdProfile(corrected, profile.scale)


def termwise_ld_correction(profile: ThresholdProfile, n: int) -> ThresholdProfile:
    """Square-root version of :func:`ld_correction` for amplitude-scale profiles."""
    dyadic_power(n)
    return ThresholdProfile(
        {level: lam * _level_factor(level, -0.5) for level, lam in profile.per_level.items()},
        profile.scale,
    )


def to_full_levels(half_profile: ThresholdProfile, j0: int, big_j: int) -> ThresholdProfile:
    """Map a half-data profile onto full-data levels ``j0..J-1`` aligned at the finest level.

    Full levels with no half-data counterpart reuse the coarsest half threshold.
    """
    sources = _half_sources(half_profile.per_level, j0, big_j)
    return ThresholdProfile(
        {level: half_profile[half] for level, half in sources.items()}, half_profile.scale
    )


def _half_sources(half_levels: Iterable[int], j0: int, big_j: int) -> dict[int, int]:
    available = sorted(half_levels)
    return {
        level: level - 1 if level - 1 in available else available[0] for level in range(j0, big_j)
    }


def carry_kill_all(
    ctx: CvContext,
    half_profile: ThresholdProfile,
    profile: ThresholdProfile,
    d: WaveletDecomposition,
    partition: BlockPartition | None,
) -> ThresholdProfile:
    """Keep levels empty on the full data when the search emptied them on the halves.

    The smallest threshold that zeroes a half-data level is that level's largest
    block energy (or coefficient). The full data holds more blocks, so after the
    sample-size correction a single large block can still clear it. Such levels
    are raised to the smallest threshold that zeroes them on *d*.
    """
    raised: dict[int, float] = {}
    sources = _half_sources(half_profile.per_level, d.j0, d.J)
    for level, half in sources.items():
        if half_profile[half] < ctx.kill_threshold(half):
            continue
        needed = float(decision_values(d.details[level], partition, level).max())
        if needed > profile[level]:
            raised[level] = needed
    if raised:
        logger.debug("Levels emptied on both halves, raised on the full data: %s", raised)
    return profile.updated(raised)


def _check_length(y: FloatArray, minimum: int) -> int:
    if y.ndim != 1 or y.size < minimum:
        raise SignalLengthError(f"Need a series of at least {minimum} samples, got {y.size}")
    return dyadic_power(y.size)


@performance_monitor
def nason_cv(
    y: npt.ArrayLike,
    bank: FilterBank,
    j0: int,
    rule: Rule = "hard",
    cfg: SearchConfig | None = None,
) -> DenoiseResult:
    """Nason's even-odd cross-validation with one global term-by-term threshold."""
    cfg = cfg or SearchConfig()
    values = np.asarray(y, dtype=np.float64)
    big_j = _check_length(values, 4)
    ctx = CvContext.build(values, bank, j0, mode="term_by_term", rule=rule, agreement_term=False)
    levels = ctx.levels
    best = _search(
        ctx,
        levels,
        ThresholdProfile.constant(levels, 0.0, "amplitude"),
        search_range(ctx, levels),
        cfg,
        cv_objective,
    )
    lam = nason_correction(best.lam, values.size)
    d = dwt(values, bank, j0)
    profile = ThresholdProfile.constant(d.levels, lam, "amplitude")
    thresholded = apply_termwise(d, profile, rule)
    logger.info("Nason CV on n=%d: lambda(n/2)=%.6g lambda(n)=%.6g", values.size, best.lam, lam)
    return DenoiseResult(
        estimate=idwt(thresholded),
        decomposition=thresholded,
        profile=profile,
        uncorrected=ThresholdProfile.constant(range(j0, big_j), best.lam, "amplitude"),
        objective_trace=[best.value],
    )


def _level_dependent(
    ctx: CvContext,
    cfg: SearchConfig,
    refine: bool,
) -> tuple[ThresholdProfile, list[float], int]:
    if refine:
        start = initial_cascade(ctx, cfg)
        refined = coordinate_refine(ctx, start, cfg)
        return refined.profile, refined.objective_trace, refined.sweeps
    levels = ctx.levels
    start = ThresholdProfile.constant(levels, 0.0, ctx.scale)
    best = _search(ctx, levels, start, search_range(ctx, levels), cfg, cv_objective)
    return ThresholdProfile.constant(levels, best.lam, ctx.scale), [best.value], 0


def _block_cv(
    y: npt.ArrayLike, bank: FilterBank, j0: int, cfg: SearchConfig | None, refine: bool
) -> DenoiseResult:
    cfg = cfg or SearchConfig()
    values = np.asarray(y, dtype=np.float64)
    big_j = _check_length(values, 16)
    ctx = CvContext.build(values, bank, j0, mode="block")
    half_profile, trace, sweeps = _level_dependent(ctx, cfg, refine)
    uncorrected = to_full_levels(half_profile, j0, big_j)
    d = dwt(values, bank, j0)
    partition = make_block_partition(big_j, j0, values.size)
    profile = carry_kill_all(
        ctx, half_profile, ld_correction(uncorrected, values.size), d, partition
    )
    thresholded = apply_blockwise(d, profile, partition)
    result = DenoiseResult(
        estimate=idwt(thresholded),
        decomposition=thresholded,
        profile=profile,
        uncorrected=uncorrected,
        block_size=partition.L,
        objective_trace=trace,
        sweeps=sweeps,
    )
    logger.info(
        "Block CV on n=%d (L=%d): lambda=%s retained=%.3f",
        values.size,
        partition.L,
        profile.per_level,
        result.retained_fraction,
    )
    return result


@performance_monitor
def ld_block_cv(
    y: npt.ArrayLike,
    bank: FilterBank,
    j0: int,
    rule: Rule = "hard",
    cfg: SearchConfig | None = None,
) -> DenoiseResult:
    """Level-dependent block thresholding with thresholds chosen by even-odd CV.

    Block projection is keep-or-kill by construction, so *rule* is accepted for
    interface symmetry and ignored.
    """
    return _block_cv(y, bank, j0, cfg, refine=True)


@performance_monitor
def global_block_cv(
    y: npt.ArrayLike,
    bank: FilterBank,
    j0: int,
    cfg: SearchConfig | None = None,
) -> DenoiseResult:
    """Block thresholding with one cross-validated threshold shared by every level."""
    return _block_cv(y, bank, j0, cfg, refine=False)


@performance_monitor
def ld_termwise_cv(
    y: npt.ArrayLike,
    bank: FilterBank,
    j0: int,
    rule: Rule = "hard",
    cfg: SearchConfig | None = None,
) -> DenoiseResult:
    """Level-dependent term-by-term thresholds chosen by even-odd CV."""
    cfg = cfg or SearchConfig()
    values = np.asarray(y, dtype=np.float64)
    big_j = _check_length(values, 16)
    ctx = CvContext.build(values, bank, j0, mode="term_by_term", rule=rule)
    half_profile, trace, sweeps = _level_dependent(ctx, cfg, refine=True)
    uncorrected = to_full_levels(half_profile, j0, big_j)
    d = dwt(values, bank, j0)
    profile = carry_kill_all(
        ctx, half_profile, termwise_ld_correction(uncorrected, values.size), d, None
    )
    thresholded = apply_termwise(d, profile, rule)
    return DenoiseResult(
        estimate=idwt(thresholded),
        decomposition=thresholded,
        profile=profile,
        uncorrected=uncorrected,
        objective_trace=trace,
        sweeps=sweeps,
    )
