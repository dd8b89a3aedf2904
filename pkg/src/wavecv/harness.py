"""Monte-Carlo simulation runner and the single-series denoising pipeline.

Every method in a (cell, repetition) pair denoises the same noisy vector, and
each repetition draws from its own RNG substream, so the results do not depend
on the number of worker processes or on scheduling order.
"""

from __future__ import annotations

import csv
import logging
import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError
from scipy import stats

from . import get_method
from .config import BASELINE_METHOD, DenoiseOptions, SimulationConfig
from .exceptions import ConfigError, ParseError, SignalLengthError, WaveCvError
from .models import Cell, DenoiseResult, RepetitionRecord, ResultRow, ResultTable
from .padding import PaddedSignal, reflect_pad
from .signals import NoiseSpec, mse, noisy_signal, stream_key, substream, test_function
from .utils import PerformanceTracker
from .wavelets import FloatArray, build_filter, default_j0

logger = logging.getLogger(__name__)

MIN_DENOISE_LENGTH = 16

LAMBDA_LOG_COLUMNS = (
    "function",
    "n",
    "snr",
    "noise",
    "rep",
    "method",
    "level",
    "lambda_uncorrected",
    "lambda",
)


@dataclass
class CellOutcome:
    """Records of one simulation cell, or the reason it was skipped."""

    cell: Cell
    records: list[RepetitionRecord]
    error: str | None = None


def iter_cells(cfg: SimulationConfig) -> Iterator[Cell]:
    """Cells in deterministic order: function, size, SNR, noise family."""
    for function, n, snr, noise in product(cfg.functions, cfg.sizes, cfg.snrs, cfg.noise_families):
        yield Cell(function=function, n=n, snr=snr, noise=noise)


def _noise_spec(cell: Cell) -> NoiseSpec:
    try:
        return NoiseSpec(family=cell.noise, snr=cell.snr)  # type: ignore[arg-type]
    except ValidationError as err:
        raise ConfigError("; ".join(e["msg"] for e in err.errors())) from err


def run_cell(cell: Cell, cfg: SimulationConfig) -> CellOutcome:
    """All repetitions of one cell.

    Configuration problems are captured in the outcome instead of raised so the
    rest of the run can continue.
    """
    try:
        spec = _noise_spec(cell)
        truth = test_function(cell.function, cell.n)
        bank = build_filter(cfg.filter)
        methods = [get_method(name, rule=cfg.rule, search=cfg.search) for name in cfg.methods]
    except WaveCvError as err:
        logger.warning("Skipping cell %s: %s", cell.label(), err)
        return CellOutcome(cell=cell, records=[], error=str(err))

    j0 = default_j0(cell.n, cfg.j0_offset)
    key = stream_key(cell.function, cell.n, cell.snr, cell.noise)
    records: list[RepetitionRecord] = []
    with PerformanceTracker(f"cell {cell.label()}") as tracker:
        for rep in range(cfg.reps):
            y = noisy_signal(truth, spec, substream(cfg.master_seed, key, rep))
            for method in methods:
                result = method.denoise(y, bank, j0)
                records.append(
                    RepetitionRecord(
                        cell=cell,
                        rep=rep,
                        method=method.name,
                        mse=mse(result.estimate, truth),
                        lambdas=dict(result.profile.per_level),
                        lambdas_uncorrected=(
                            dict(result.uncorrected.per_level) if result.uncorrected else {}
                        ),
                    )
                )
    logger.info("Finished cell %s (%d reps) in %.2fs", cell.label(), cfg.reps, tracker.elapsed)
    return CellOutcome(cell=cell, records=records)


def _run_cell_job(job: tuple[Cell, SimulationConfig]) -> CellOutcome:
    return run_cell(*job)


def _paired_p_value(sample: np.ndarray, leader: np.ndarray) -> float:
    if np.array_equal(sample, leader):
        return 1.0
    p = float(stats.ttest_rel(sample, leader).pvalue)
    return 1.0 if math.isnan(p) else min(max(p, 0.0), 1.0)


def summarize_cell(
    cell: Cell, records: Sequence[RepetitionRecord], methods: Sequence[str], alpha: float
) -> list[ResultRow]:
    """Mean and sd of MSE per method, ratio to the baseline, paired t-test against the leader.

    The leader is the method with the lowest mean MSE (first listed on ties); it
    reports ``p = 1``. A row is highlighted when it is the leader or its paired
    p-value is at least *alpha*.
    """
    samples: dict[str, np.ndarray] = {}
    for name in methods:
        ordered = sorted((r for r in records if r.method == name), key=lambda r: r.rep)
        samples[name] = np.array([r.mse for r in ordered], dtype=np.float64)

    means = {name: float(values.mean()) for name, values in samples.items()}
    leader = min(methods, key=lambda name: means[name])
    baseline = means[BASELINE_METHOD]

    rows = []
    for name in methods:
        mean = means[name]
        if baseline > 0.0:
            ratio = mean / baseline
        else:
            ratio = 1.0 if mean == 0.0 else math.inf
        p_value = 1.0 if name == leader else _paired_p_value(samples[name], samples[leader])
        rows.append(
            ResultRow(
                function=cell.function,
                n=cell.n,
                snr=cell.snr,
                noise=cell.noise,
                method=name,
                mean_mse=mean,
                sd_mse=float(samples[name].std(ddof=1)) if samples[name].size > 1 else 0.0,
                ratio=ratio,
                p_value=p_value,
                highlight=name == leader or p_value >= alpha,
            )
        )
    return rows


def write_lambda_log(path: Path, outcomes: Sequence[CellOutcome]) -> None:
    """One CSV row per (cell, repetition, method, level) with raw and corrected thresholds."""
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\r\n")
        writer.writerow(LAMBDA_LOG_COLUMNS)
        for outcome in outcomes:
            for record in outcome.records:
                cell = record.cell
                for level, lam in record.lambdas.items():
                    raw = record.lambdas_uncorrected.get(level)
                    writer.writerow(
                        [
                            cell.function,
                            cell.n,
                            f"{cell.snr:g}",
                            cell.noise,
                            record.rep,
                            record.method,
                            level,
                            "" if raw is None else f"{raw:.10g}",
                            f"{lam:.10g}",
                        ]
                    )


def run_simulation(cfg: SimulationConfig) -> ResultTable:
    """Run every cell of *cfg* and aggregate the paired comparison table."""
    cells = list(iter_cells(cfg))
    logger.info("Running %d cells x %d reps with %d worker(s)", len(cells), cfg.reps, cfg.workers)
    jobs = [(cell, cfg) for cell in cells]
    if cfg.workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_run_cell_job, jobs))
    else:
        outcomes = [_run_cell_job(job) for job in jobs]

    table = ResultTable(alpha=cfg.alpha)
    for outcome in outcomes:
        if outcome.error is not None:
            table.skipped.append(f"{outcome.cell.label()}: {outcome.error}")
            continue
        table.rows.extend(summarize_cell(outcome.cell, outcome.records, cfg.methods, cfg.alpha))

    if cfg.lambda_log is not None:
        write_lambda_log(Path(cfg.lambda_log), outcomes)
        logger.info("Wrote threshold log to %s", cfg.lambda_log)
    return table


def parse_series(text: str) -> FloatArray:
    """Read a one-column numeric series.

    Blank lines and ``#`` comments are skipped, as is a single non-numeric header
    line before the first value. A trailing comma is tolerated.

    Raises:
        ParseError: for any other non-numeric line, with its 1-based line number.
    """
    values: list[float] = []
    header_seen = False
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip().rstrip(",").strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = float(line)
        except ValueError:
            if not values and not header_seen:
                header_seen = True
                continue
            raise ParseError(f"not a number: {raw.strip()!r}", line_number=line_number) from None
        if not math.isfinite(value):
            raise ParseError(f"not a finite number: {raw.strip()!r}", line_number=line_number)
        values.append(value)
    return np.array(values, dtype=np.float64)


@dataclass(eq=False)
class DenoisedSeries:
    """Reconstruction of the observed region plus the run it came from."""

    estimate: FloatArray
    result: DenoiseResult
    padding: PaddedSignal
    j0: int
    filter: str

    def diagnostics(self) -> dict[str, Any]:
        report: dict[str, Any] = dict(self.result.to_dict())
        report.update(
            n=self.padding.original_length,
            padded_length=int(self.padding.padded.size),
            offset=self.padding.original_offset,
            j0=self.j0,
            filter=self.filter,
            retained_percent=100.0 * self.result.retained_fraction,
        )
        return report


def denoise_series(data: FloatArray, options: DenoiseOptions) -> DenoisedSeries:
    """Pad to dyadic length by reflection, denoise, and cut back to the observed region.

    Raises:
        SignalLengthError: for fewer than 16 observations.
    """
    if data.size < MIN_DENOISE_LENGTH:
        raise SignalLengthError(
            f"Need at least {MIN_DENOISE_LENGTH} observations to denoise, got {data.size}"
        )
    padded = reflect_pad(data)
    j0 = default_j0(padded.padded.size, options.j0_offset)
    method = get_method(options.method, rule=options.rule, search=options.search)
    result = method.denoise(padded.padded, build_filter(options.filter), j0)
    logger.info(
        "Denoised %d samples (padded to %d) with %s: %.1f%% of detail coefficients retained",
        data.size,
        padded.padded.size,
        method.name,
        100.0 * result.retained_fraction,
    )
    return DenoisedSeries(
        estimate=padded.extract(result.estimate),
        result=result,
        padding=padded,
        j0=result.decomposition.j0,
        filter=options.filter,
    )


def denoise_file(path: str | Path, options: DenoiseOptions) -> DenoisedSeries:
    """:func:`denoise_series` on a one-column text file."""
    text = Path(path).read_text(encoding="utf-8")
    return denoise_series(parse_series(text), options)
