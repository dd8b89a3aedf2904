"""Base denoising method interface"""

from __future__ import annotations

import abc
import logging
from typing import ClassVar

import numpy.typing as npt

from ..config import SearchConfig
from ..exceptions import ConfigError
from ..models import DenoiseResult
from ..thresholding import Rule
from ..wavelets import FilterBank, dyadic_power

logger = logging.getLogger(__name__)


class DenoisingMethod(abc.ABC):
    """Abstract base class for wavelet denoising methods"""

    name: ClassVar[str] = ""
    # coarsest level the method can threshold; requested levels below it are raised
    min_j0: ClassVar[int] = 0
    # rules the method supports; None means the rule is not used
    rules: ClassVar[tuple[Rule, ...] | None] = ("hard", "soft")

    def __init__(self, rule: Rule = "hard", search: SearchConfig | None = None) -> None:
        """Initialize the method

        Args:
            rule: Term-by-term rule for methods that threshold coefficient by coefficient
            search: Optimizer settings for cross-validated methods
        """
        if self.rules is not None and rule not in self.rules:
            raise ConfigError(f"Method '{self.name}' does not support the {rule} rule")
        self.rule: Rule = rule
        self.search = search or SearchConfig()

    def denoise(self, y: npt.ArrayLike, bank: FilterBank, j0: int) -> DenoiseResult:
        """Denoise a dyadic-length series

        Args:
            y: Observed series
            bank: Filter bank for the transform
            j0: Coarsest thresholded level

        Returns:
            DenoiseResult with the reconstruction and threshold diagnostics
        """
        n = len(y)  # type: ignore[arg-type]
        top = dyadic_power(n) - 1
        effective = min(max(j0, self.min_j0), top)
        if effective != j0:
            logger.debug("%s: coarsest level %d moved to %d for n=%d", self.name, j0, effective, n)
        result = self._denoise(y, bank, effective)
        result.method = self.name
        return result

    @abc.abstractmethod
    def _denoise(self, y: npt.ArrayLike, bank: FilterBank, j0: int) -> DenoiseResult:
        ...

    def __repr__(self) -> str:
        return f"{type(self).__name__}(rule={self.rule!r})"
