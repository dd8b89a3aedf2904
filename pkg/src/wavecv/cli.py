import csv
import io
import json
import logging
import sys
from functools import wraps
from pathlib import Path

import click
import numpy as np

from .config import DenoiseOptions, SearchConfig, SimulationConfig
from .exceptions import WaveCvError
from .signals import NOISE_FAMILIES, TEST_FUNCTIONS
from .wavelets import available_filters


def report_errors(f):
    @wraps(f)
    def decorated_function(*args, **kwargs):
        """Wrapper turning library and I/O errors into a one-line message and exit 1."""
        try:
            return f(*args, **kwargs)
        except (WaveCvError, OSError) as err:
            click.echo(f"Error: {err}", err=True)
            sys.exit(1)

    return decorated_function


def _setup_logging(verbose: bool) -> None:
    from rich.console import Console
    from rich.logging import RichHandler

    handler = RichHandler(console=Console(stderr=True), show_path=False)
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[handler],
        force=True,
    )


def _method_names() -> list[str]:
    from . import available_methods

    return available_methods()


def _format_series(columns: dict[str, np.ndarray]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows([f"{v:.10g}" for v in values] for values in zip(*columns.values()))
    return buffer.getvalue()


def _write_or_echo(text: str, out: Path | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Show debug logging")
def cli(verbose):
    """Wavelet denoising with cross-validated thresholds"""
    _setup_logging(verbose)


@cli.command()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Flat TOML simulation config",
)
@click.option(
    "--out",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Result table path",
)
@click.option("--format", "fmt", default="csv", type=click.Choice(["csv", "markdown"]))
@click.option(
    "--workers", type=click.IntRange(min=1), default=None, help="Override the config worker count"
)
@click.option("--quiet", is_flag=True, help="Do not print the summary table")
@report_errors
def simulate(config_path, out, fmt, workers, quiet):
    """Run a Monte-Carlo comparison and write the result table"""
    from .config import load_simulation_config
    from .harness import run_simulation
    from .tables import emit_table

    cfg = load_simulation_config(config_path)
    if workers is not None:
        cfg = cfg.model_copy(update={"workers": workers})

    table = run_simulation(cfg)
    for reason in table.skipped:
        click.echo(f"Skipped {reason}", err=True)
    if not table.rows:
        click.echo("Error: every cell was skipped; nothing to write", err=True)
        sys.exit(1)
    out.write_text(emit_table(table, fmt), encoding="utf-8", newline="")

    if not quiet:
        _print_summary(table)


def _print_summary(table) -> None:
    from rich.console import Console
    from rich.table import Table

    summary = Table(title=f"MSE ratio to VisuShrink (bold: leader or p >= {table.alpha:g})")
    for column in ("function", "n", "snr", "noise", "method", "ratio", "mean_mse", "p_value"):
        text_column = column in ("function", "noise", "method")
        summary.add_column(column, justify="left" if text_column else "right")
    for row in table.rows:
        summary.add_row(
            row.function,
            str(row.n),
            f"{row.snr:g}",
            row.noise,
            row.method,
            f"{row.ratio:.3f}",
            f"{row.mean_mse:.4g}",
            f"{row.p_value:.3g}",
            style="bold" if row.highlight else None,
        )
    Console().print(summary)


@cli.command()
@click.option(
    "--in",
    "in_path",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="One-column numeric input",
)
@click.option("--method", default="ld_block", type=click.Choice(_method_names()), show_default=True)
@click.option(
    "--filter",
    "filter_name",
    default="la8",
    type=click.Choice(available_filters()),
    show_default=True,
)
@click.option("--rule", default="hard", type=click.Choice(["hard", "soft"]), show_default=True)
@click.option("--j0-offset", default=4, type=click.IntRange(min=1), show_default=True)
@click.option(
    "--out",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="CSV with the observed and denoised series",
)
@click.option(
    "--diagnostics",
    "diagnostics_path",
    default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write threshold diagnostics as JSON",
)
@report_errors
def denoise(in_path, method, filter_name, rule, j0_offset, out, diagnostics_path):
    """Denoise a single observed series"""
    from .harness import denoise_series, parse_series

    options = DenoiseOptions(
        method=method, filter=filter_name, rule=rule, j0_offset=j0_offset, search=SearchConfig()
    )
    data = parse_series(in_path.read_text(encoding="utf-8"))
    denoised = denoise_series(data, options)
    index = np.arange(1, data.size + 1, dtype=np.float64)
    out.write_text(
        _format_series({"index": index, "y": data, "estimate": denoised.estimate}), encoding="utf-8"
    )
    if diagnostics_path is not None:
        report = json.dumps(denoised.diagnostics(), indent=2)
        diagnostics_path.write_text(report + "\n", encoding="utf-8")


@cli.command("gen-signals")
@click.option("--function", "function_id", required=True, type=click.Choice(TEST_FUNCTIONS))
@click.option("--n", "n", required=True, type=click.IntRange(min=8))
@click.option("--noise", default=None, type=click.Choice(NOISE_FAMILIES), help="Noise to add")
@click.option("--snr", default=None, type=float, help="Target signal-to-noise ratio")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--out", default=None, type=click.Path(dir_okay=False, path_type=Path))
@report_errors
def gen_signals(function_id, n, noise, snr, seed, out):
    """Sample a test function, optionally with noise, as x,f,y CSV"""
    from pydantic import ValidationError

    from .exceptions import ConfigError
    from .signals import NoiseSpec, noisy_signal, sample_points, test_function

    truth = test_function(function_id, n)
    if noise is None:
        if snr is not None:
            raise ConfigError("--snr needs --noise")
        y = truth
    else:
        try:
            spec = NoiseSpec(family=noise, snr=snr, seed=seed)
        except ValidationError as err:
            raise ConfigError("; ".join(e["msg"] for e in err.errors())) from err
        y = noisy_signal(truth, spec, np.random.default_rng(spec.seed))
    _write_or_echo(_format_series({"x": sample_points(n), "f": truth, "y": y}), out)


@cli.command("example-config")
@click.option("--out", default=None, type=click.Path(dir_okay=False, path_type=Path))
@report_errors
def example_config(out):
    """Print a config covering the T3-noise comparison grid"""
    from .config import dump_simulation_config

    cfg = SimulationConfig(
        functions=["blip", "blocks", "bumps", "corner", "doppler", "heavisine", "spikes", "wave"],
        sizes=[512, 1024, 2048],
        snrs=[3.0, 5.0, 7.0],
        noise_families=["t3"],
        methods=["ld_block", "block_cv", "ld_cv", "nason", "visushrink_hard"],
        reps=100,
    )
    _write_or_echo(dump_simulation_config(cfg), out)


if __name__ == "__main__":
    cli()
