"""Extension of non-dyadic series to the next power of two by reflection."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .exceptions import SignalLengthError
from .wavelets import FloatArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PaddedSignal:
    """A dyadic-length series holding the observed data at ``[offset, offset + length)``."""

    padded: FloatArray
    original_offset: int
    original_length: int

    def extract(self, values: npt.ArrayLike | None = None) -> FloatArray:
        """Observed region of *values* (defaults to the padded series itself)."""
        source = self.padded if values is None else np.asarray(values, dtype=np.float64)
        return source[self.original_offset : self.original_offset + self.original_length]


def next_dyadic(n: int) -> int:
    return 1 << max(n - 1, 0).bit_length()


def reflect_pad(data: npt.ArrayLike) -> PaddedSignal:
    """Mirror *data* about both boundaries up to the next dyadic length.

    The boundary sample is not repeated (``(1, 2, 3) -> (1, 2, 3, 2)``). Any odd
    extra sample goes to the end. Extensions longer than the data keep
    reflecting back and forth.

    Raises:
        SignalLengthError: for fewer than two samples.
    """
    values = np.asarray(data, dtype=np.float64).ravel()
    if values.size < 2:
        raise SignalLengthError(f"Reflection padding needs at least 2 samples, got {values.size}")

    target = next_dyadic(values.size)
    extra = target - values.size
    left = extra // 2
    padded = np.pad(values, (left, extra - left), mode="reflect")
    if extra:
        logger.debug("Padded %d samples to %d (offset %d)", values.size, target, left)
    return PaddedSignal(padded=padded, original_offset=left, original_length=values.size)
