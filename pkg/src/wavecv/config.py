"""Run configuration: optimizer settings, simulation grids and denoise options.

Simulation configs are flat TOML files. Keys that are not recognised are
ignored with a warning so older files keep loading when fields are added.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .exceptions import ConfigError
from .signals import NoiseFamily, TestFunctionId
from .wavelets import FilterName, is_dyadic

toml: Any

try:
    import toml as _toml_module  # type: ignore[import-untyped]
except ImportError:  # pragma: no cover
    _toml_module = None  # type: ignore[assignment]

toml = _toml_module

logger = logging.getLogger(__name__)

BASELINE_METHOD = "visushrink_hard"


class SearchConfig(BaseModel):
    """Settings for the derivative-free threshold search."""

    model_config = ConfigDict(frozen=True)

    grid_points: int = Field(default=64, ge=8)
    refine_rounds: int = Field(default=2, ge=0)
    max_outer_iters: int = Field(default=5, ge=1)
    convergence_tol: float = Field(default=1e-6, gt=0.0)
    # keep-or-kill searches with more breakpoints than this fall back to the grid
    max_breakpoints: int = Field(default=512, ge=0)


_SEARCH_KEYS = frozenset(SearchConfig.model_fields)


class SimulationConfig(BaseModel):
    """Grid of Monte-Carlo cells and the methods compared in each of them."""

    model_config = ConfigDict(frozen=True)

    functions: list[TestFunctionId] = Field(default_factory=lambda: ["heavisine"])
    sizes: list[int] = Field(default_factory=lambda: [1024])
    snrs: list[float] = Field(default_factory=lambda: [5.0])
    noise_families: list[NoiseFamily] = Field(default_factory=lambda: ["t3"])
    methods: list[str] = Field(default_factory=lambda: ["ld_block", "nason", BASELINE_METHOD])
    reps: int = Field(default=100, ge=2)
    filter: FilterName = "la8"
    j0_offset: int = Field(default=4, ge=1)
    master_seed: int = Field(default=20240101, ge=0)
    rule: Literal["hard", "soft"] = "hard"
    workers: int = Field(default=1, ge=1)
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    lambda_log: Path | None = None
    search: SearchConfig = Field(default_factory=SearchConfig)

    @field_validator("sizes")
    @classmethod
    def _dyadic_sizes(cls, sizes: list[int]) -> list[int]:
        bad = [n for n in sizes if not (is_dyadic(n) and n >= 16)]
        if bad:
            raise ValueError(f"sizes must be powers of two >= 16, got {bad}")
        return sizes

    @field_validator("snrs")
    @classmethod
    def _positive_snrs(cls, snrs: list[float]) -> list[float]:
        if any(not s > 0 for s in snrs):
            raise ValueError(f"snrs must be positive, got {snrs}")
        return snrs

    @field_validator("methods")
    @classmethod
    def _known_methods_with_baseline(cls, methods: list[str]) -> list[str]:
        from . import available_methods

        known = set(available_methods())
        unknown = [m for m in methods if m not in known]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; expected some of {sorted(known)}")
        ordered = list(dict.fromkeys(methods))
        if BASELINE_METHOD not in ordered:
            ordered.append(BASELINE_METHOD)
        return ordered


class DenoiseOptions(BaseModel):
    """Options for denoising a single observed series."""

    model_config = ConfigDict(frozen=True)

    method: str = "ld_block"
    filter: FilterName = "la8"
    rule: Literal["hard", "soft"] = "hard"
    j0_offset: int = Field(default=4, ge=1)
    search: SearchConfig = Field(default_factory=SearchConfig)


def _validated(model: type[BaseModel], data: dict[str, Any], source: str) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as err:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in e['loc']) or 'config'}: {e['msg']}" for e in err.errors()
        )
        raise ConfigError(f"Invalid configuration in {source}: {problems}") from err


def simulation_config_from_mapping(
    data: dict[str, Any], source: str = "<mapping>"
) -> SimulationConfig:
    """Build a :class:`SimulationConfig` from flat key/value pairs."""
    known = set(SimulationConfig.model_fields) - {"search"}
    settings: dict[str, Any] = {}
    search: dict[str, Any] = {}
    for key, value in data.items():
        if key in _SEARCH_KEYS:
            search[key] = value
        elif key in known:
            settings[key] = value
        else:
            logger.warning("Ignoring unknown config key '%s' in %s", key, source)
    settings["search"] = _validated(SearchConfig, search, source)
    return _validated(SimulationConfig, settings, source)


def load_simulation_config(path: str | Path) -> SimulationConfig:
    """Read a flat TOML simulation config.

    Raises:
        ConfigError: if the file cannot be read or parsed, or holds invalid values.
    """
    config_file = Path(path)
    if toml is None:  # pragma: no cover
        raise ConfigError("The 'toml' package is required to read config files")
    try:
        data = toml.loads(config_file.read_text(encoding="utf-8"))
    except OSError as err:
        raise ConfigError(f"Could not read config file {config_file}: {err}") from err
    except toml.TomlDecodeError as err:
        raise ConfigError(f"Config file {config_file} is not valid TOML: {err}") from err

    nested = [key for key, value in data.items() if isinstance(value, dict)]
    if nested:
        raise ConfigError(f"Config file {config_file} must be flat; found tables {nested}")
    return simulation_config_from_mapping(data, str(config_file))


def dump_simulation_config(config: SimulationConfig) -> str:
    """Flat TOML text that :func:`load_simulation_config` reads back to *config*."""
    if toml is None:  # pragma: no cover
        raise ConfigError("The 'toml' package is required to write config files")
    flat = config.model_dump(mode="json", exclude={"search"}, exclude_none=True)
    flat.update(config.search.model_dump())
    return toml.dumps(flat)
