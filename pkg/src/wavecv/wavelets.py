"""Orthonormal filter banks and the periodic discrete wavelet transform.

Transforms go through PyWavelets in ``periodization`` mode, so for ``n = 2**J``
samples the forward transform is multiplication by an orthogonal ``n x n``
matrix ``W`` and the inverse is ``W.T``.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt
import pywt

from .exceptions import ConfigError, SignalLengthError, StructureError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
FilterName = Literal["haar", "la8"]

_PYWT_MODE = "periodization"

# la8 is the Daubechies least-asymmetric length-8 filter, Symmlet 4 in PyWavelets
_PYWT_NAMES: dict[str, str] = {
    "haar": "haar",
    "la8": "sym4",
}


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Quadrature-mirror filter pair defining an orthonormal wavelet basis."""

    name: str
    wavelet: pywt.Wavelet
    scaling_taps: FloatArray = field(init=False)
    wavelet_taps: FloatArray = field(init=False)

    def __post_init__(self) -> None:
        if not self.wavelet.orthogonal:
            raise ConfigError(f"Filter '{self.name}' is not orthogonal")
        h = np.asarray(self.wavelet.rec_lo, dtype=np.float64)
        g = np.asarray(self.wavelet.rec_hi, dtype=np.float64)
        h.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "scaling_taps", h)
        object.__setattr__(self, "wavelet_taps", g)

    @property
    def length(self) -> int:
        return int(self.wavelet.dec_len)


def available_filters() -> list[str]:
    """Names accepted by :func:`build_filter`."""
    return sorted(_PYWT_NAMES)


def build_filter(name: str) -> FilterBank:
    """Return the standard orthonormal filter bank called *name*.

    Raises:
        ConfigError: if *name* is not a known filter.
    """
    key = name.lower().strip()
    if key not in _PYWT_NAMES:
        raise ConfigError(
            f"Unknown filter '{name}'; expected one of {', '.join(available_filters())}"
        )
    return FilterBank(name=key, wavelet=pywt.Wavelet(_PYWT_NAMES[key]))


def is_dyadic(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def dyadic_power(n: int) -> int:
    """Return J with ``n == 2**J``.

    Raises:
        SignalLengthError: if *n* is not a power of two.
    """
    if not is_dyadic(n):
        raise SignalLengthError(f"Length {n} is not a power of two")
    return n.bit_length() - 1


def default_j0(n: int, offset: int = 4) -> int:
    """Coarsest thresholded level ``J - offset`` clamped to ``[0, J - 1]``."""
    big_j = dyadic_power(n)
    return min(max(big_j - offset, 0), max(big_j - 1, 0))


@dataclass(frozen=True, eq=False)
class WaveletDecomposition:
    """Scaling coefficients at level ``j0`` plus detail coefficients for ``j0..J-1``."""

    coarse: FloatArray
    details: dict[int, FloatArray]
    J: int
    j0: int
    filter: FilterBank

    def __post_init__(self) -> None:
        if not 0 <= self.j0 <= self.J - 1:
            raise StructureError(f"j0={self.j0} outside [0, {self.J - 1}]")
        if self.coarse.shape != (2**self.j0,):
            raise StructureError(
                f"Coarse block has {self.coarse.size} coefficients, expected {2**self.j0}"
            )
        expected = list(range(self.j0, self.J))
        if sorted(self.details) != expected:
            raise StructureError(f"Detail levels {sorted(self.details)} do not match {expected}")
        for level, coeffs in self.details.items():
            if coeffs.shape != (2**level,):
                raise StructureError(
                    f"Level {level} has {coeffs.size} coefficients, expected {2**level}"
                )

    @property
    def n(self) -> int:
        return 2**self.J

    @property
    def levels(self) -> range:
        """Detail levels from coarsest to finest."""
        return range(self.j0, self.J)

    def with_details(self, details: dict[int, FloatArray]) -> WaveletDecomposition:
        """Copy of this decomposition with replaced detail levels."""
        return WaveletDecomposition(
            coarse=self.coarse, details=details, J=self.J, j0=self.j0, filter=self.filter
        )

    def flatten(self) -> FloatArray:
        """Coefficients in the order ``(xi_{j0}, theta_{j0}, ..., theta_{J-1})``."""
        return np.concatenate([self.coarse, *(self.details[j] for j in self.levels)])

    def detail_count(self) -> int:
        return sum(self.details[j].size for j in self.levels)

    def nonzero_details(self) -> int:
        return int(sum(np.count_nonzero(self.details[j]) for j in self.levels))


def dwt(y: npt.ArrayLike, bank: FilterBank, j0: int) -> WaveletDecomposition:
    """Periodic forward DWT of *y* down to level *j0*.

    Raises:
        SignalLengthError: if ``len(y)`` is not a power of two (or is 1).
        StructureError: if *j0* is outside ``[0, J - 1]``.
    """
    values = np.asarray(y, dtype=np.float64)
    if values.ndim != 1 or values.size < 2:
        raise SignalLengthError("The DWT needs a one-dimensional series of length >= 2")
    big_j = dyadic_power(values.size)
    if not 0 <= j0 <= big_j - 1:
        raise StructureError(f"j0={j0} outside [0, {big_j - 1}] for n={values.size}")

    with warnings.catch_warnings():
        # periodization is exact at any depth; PyWavelets still warns past dwt_max_level
        warnings.simplefilter("ignore", UserWarning)
        coeffs = pywt.wavedec(values, bank.wavelet, mode=_PYWT_MODE, level=big_j - j0)
    coarse, *finer = coeffs
    details = {level: np.asarray(c, dtype=np.float64) for level, c in zip(range(j0, big_j), finer)}
    return WaveletDecomposition(
        coarse=np.asarray(coarse, dtype=np.float64), details=details, J=big_j, j0=j0, filter=bank
    )


def idwt(d: WaveletDecomposition) -> FloatArray:
    """Inverse of :func:`dwt`."""
    approx_size = d.coarse.size
    for level in d.levels:
        size = d.details[level].size
        if size != approx_size:
            raise StructureError(
                f"Level {level} has {size} coefficients but the running approximation "
                f"has {approx_size}"
            )
        approx_size *= 2
    coeffs = [d.coarse, *(d.details[j] for j in d.levels)]
    return np.asarray(pywt.waverec(coeffs, d.filter.wavelet, mode=_PYWT_MODE), dtype=np.float64)
