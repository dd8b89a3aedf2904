"""Baseline estimators that assume Gaussian noise: VisuShrink, SureShrink, HybridShrink"""

from __future__ import annotations

import abc
import logging
from typing import ClassVar, final

import numpy as np
import numpy.typing as npt

from ..models import DenoiseResult
from ..thresholding import Rule, ThresholdProfile, apply_termwise, sure_profile, visushrink_profile
from ..wavelets import FilterBank, WaveletDecomposition, dwt, idwt
from .base import DenoisingMethod

logger = logging.getLogger(__name__)


class _TermwiseBaseline(DenoisingMethod):
    """Shared plumbing: estimate a profile on the full decomposition and apply it termwise"""

    rules = None
    fixed_rule: ClassVar[Rule] = "soft"

    @abc.abstractmethod
    def _profile(self, d: WaveletDecomposition) -> ThresholdProfile:
        ...

    def _denoise(self, y: npt.ArrayLike, bank: FilterBank, j0: int) -> DenoiseResult:
        d = dwt(np.asarray(y, dtype=np.float64), bank, j0)
        profile = self._profile(d)
        thresholded = apply_termwise(d, profile, self.fixed_rule)
        return DenoiseResult(estimate=idwt(thresholded), decomposition=thresholded, profile=profile)


@final
class VisuShrinkHard(_TermwiseBaseline):
    """Universal threshold, keep-or-kill"""

    name: ClassVar[str] = "visushrink_hard"
    fixed_rule: ClassVar[Rule] = "hard"

    def _profile(self, d: WaveletDecomposition) -> ThresholdProfile:
        return visushrink_profile(d)


@final
class VisuShrinkSoft(_TermwiseBaseline):
    """Universal threshold, shrink toward zero"""

    name: ClassVar[str] = "visushrink_soft"

    def _profile(self, d: WaveletDecomposition) -> ThresholdProfile:
        return visushrink_profile(d)


@final
class SureShrink(_TermwiseBaseline):
    name: ClassVar[str] = "sureshrink"

    def _profile(self, d: WaveletDecomposition) -> ThresholdProfile:
        return sure_profile(d)


@final
class HybridShrink(_TermwiseBaseline):
    name: ClassVar[str] = "hybridshrink"

    def _profile(self, d: WaveletDecomposition) -> ThresholdProfile:
        return sure_profile(d, hybrid=True)
