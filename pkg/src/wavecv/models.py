from __future__ import annotations

from dataclasses import dataclass, field
from typing import TypedDict

from pydantic import BaseModel, ConfigDict, Field

from .thresholding import ThresholdProfile
from .wavelets import FloatArray, WaveletDecomposition


DiagnosticsDict = TypedDict(
    "DiagnosticsDict",
    {
        "method": str,
        "scale": str,
        "block_size": int | None,
        "lambda_uncorrected": dict[str, float] | None,
        "lambda": dict[str, float],
        "lambda_standardized": dict[str, float],
        "objective_trace": list[float],
        "sweeps": int,
        "retained_fraction": float,
    },
)


@dataclass(eq=False)
class DenoiseResult:
    """Reconstruction of one denoising run plus its threshold diagnostics."""

    estimate: FloatArray
    decomposition: WaveletDecomposition
    profile: ThresholdProfile
    method: str = ""
    uncorrected: ThresholdProfile | None = None
    block_size: int | None = None
    objective_trace: list[float] = field(default_factory=list)
    sweeps: int = 0

    @property
    def retained_fraction(self) -> float:
        """Share of thresholded detail coefficients left nonzero."""
        total = self.decomposition.detail_count()
        return self.decomposition.nonzero_details() / total if total else 0.0

    @property
    def standardized(self) -> dict[int, float]:
        """Thresholds per coefficient: ``sqrt(lambda / L)`` for block profiles."""
        return self.profile.standardized(self.block_size or 1)

    def to_dict(self) -> DiagnosticsDict:
        d: DiagnosticsDict = {
            "method": self.method,
            "scale": self.profile.scale,
            "block_size": self.block_size,
            "lambda_uncorrected": (
                None
                if self.uncorrected is None
                else {str(j): v for j, v in self.uncorrected.per_level.items()}
            ),
            "lambda": {str(j): v for j, v in self.profile.per_level.items()},
            "lambda_standardized": {str(j): v for j, v in self.standardized.items()},
            "objective_trace": list(self.objective_trace),
            "sweeps": self.sweeps,
            "retained_fraction": self.retained_fraction,
        }
        return d


@dataclass(frozen=True)
class Cell:
    """One (function, n, SNR, noise) combination of a simulation grid."""

    function: str
    n: int
    snr: float
    noise: str

    def label(self) -> str:
        return f"{self.function}/n={self.n}/snr={self.snr:g}/{self.noise}"


@dataclass
class RepetitionRecord:
    cell: Cell
    rep: int
    method: str
    mse: float
    lambdas: dict[int, float] = field(default_factory=dict)
    lambdas_uncorrected: dict[int, float] = field(default_factory=dict)


class ResultRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    function: str
    n: int
    snr: float
    noise: str
    method: str
    mean_mse: float
    sd_mse: float = Field(ge=0.0)
    ratio: float
    p_value: float = Field(ge=0.0, le=1.0)
    highlight: bool = False


class ResultTable(BaseModel):
    rows: list[ResultRow] = Field(default_factory=list)
    skipped: list[str] = Field(default_factory=list)
    alpha: float = 0.05
