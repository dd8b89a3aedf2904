"""Even-odd cross-validated estimators"""

from __future__ import annotations

import logging
from typing import ClassVar, final

import numpy.typing as npt

from ..cvthreshold import global_block_cv, ld_block_cv, ld_termwise_cv, nason_cv
from ..models import DenoiseResult
from ..wavelets import FilterBank
from .base import DenoisingMethod

logger = logging.getLogger(__name__)


@final
class NasonCv(DenoisingMethod):
    """One global term-by-term threshold, Nason's statistic and correction"""

    name: ClassVar[str] = "nason"

    def _denoise(self, y: npt.ArrayLike, bank: FilterBank, j0: int) -> DenoiseResult:
        return nason_cv(y, bank, j0, self.rule, self.search)


@final
class LdBlockCv(DenoisingMethod):
    """Level-dependent block thresholding (the headline estimator)"""

    name: ClassVar[str] = "ld_block"
    # the level correction needs more than two points per level
    min_j0: ClassVar[int] = 2
    rules = None

    def _denoise(self, y: npt.ArrayLike, bank: FilterBank, j0: int) -> DenoiseResult:
        return ld_block_cv(y, bank, j0, cfg=self.search)


@final
class GlobalBlockCv(DenoisingMethod):
    """Block thresholding with a single cross-validated threshold"""

    name: ClassVar[str] = "block_cv"
    min_j0: ClassVar[int] = 2
    rules = None

    def _denoise(self, y: npt.ArrayLike, bank: FilterBank, j0: int) -> DenoiseResult:
        return global_block_cv(y, bank, j0, cfg=self.search)


@final
class LdTermwiseCv(DenoisingMethod):
    """Level-dependent term-by-term thresholds chosen with the full CV statistic"""

    name: ClassVar[str] = "ld_cv"
    min_j0: ClassVar[int] = 2

    def _denoise(self, y: npt.ArrayLike, bank: FilterBank, j0: int) -> DenoiseResult:
        return ld_termwise_cv(y, bank, j0, self.rule, self.search)
